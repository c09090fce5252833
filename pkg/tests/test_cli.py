import json

import pytest

from ringbox.cli import RunConfig, bench_queries, fit_exponent, main, run

Z12 = "ring.kind = modular\nring.n = 12\n"
Z6 = "ring.kind = modular\nring.n = 6\n"
M2Z2 = "ring.kind = matrix\nring.k = 2\nring.base = modular 2\n"
F4 = "ring.kind = polyquot\nring.p = 2\nring.f = 1, 1, 1\n"
Z2XZ9 = "ring.kind = product\nring.factors = modular 2, modular 9\n"


@pytest.fixture
def ring_file(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def invoke(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_basis_z12(ring_file, capsys):
    path = ring_file("z12.ring", Z12)
    code, out, err = invoke(capsys, ["basis", "--ring", path, "--ideal", "4", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "ringbox.run/1"
    assert doc["result"]["orders"] == [3]
    assert doc["result"]["ideal_order"] == 3
    assert doc["result"]["tensor"] == [[[1]]]
    assert doc["result"]["generators"] == ["4"]


def test_prime_not_prime(ring_file, capsys):
    path = ring_file("z12.ring", Z12)
    code, out, _ = invoke(capsys, ["prime", "--ring", path, "--ideal", "4", "--json"])
    assert code == 0
    assert json.loads(out)["result"]["verdict"] == "not-prime"
    code, out, _ = invoke(capsys, ["prime", "--ring", path, "--ideal", "3", "--json"])
    assert json.loads(out)["result"]["verdict"] == "prime"


def test_solve_no_solution_exit_zero(ring_file, capsys):
    path = ring_file("z12.ring", Z12)
    code, out, _ = invoke(capsys, ["solve", "--ring", path, "--a", "4", "--b", "2"])
    assert code == 0
    assert "no solution" in out


def test_all_ring_kinds_parse_and_run(ring_file, capsys):
    for name, text, lit in [
        ("z12.ring", Z12, "5"),
        ("m2z2.ring", M2Z2, "1,0;0,1"),
        ("f4.ring", F4, "[0, 1]"),
        ("z2z9.ring", Z2XZ9, "(1, 1)"),
    ]:
        path = ring_file(name, text)
        code, out, err = invoke(
            capsys, ["unit", "--ring", path, "--element", lit, "--json"]
        )
        assert code == 0, err
        assert json.loads(out)["result"]["unit"] is True


def test_parse_errors_exit_2(ring_file, capsys):
    bad = ring_file("bad.ring", "ring.kind = gadget\n")
    code, _, err = invoke(capsys, ["order", "--ring", bad, "--ideal", "1"])
    assert code == 2
    path = ring_file("z12.ring", Z12)
    code, _, err = invoke(capsys, ["member", "--ring", path, "--ideal", "4"])
    assert code == 2  # missing --element
    code, _, err = invoke(
        capsys, ["member", "--ring", path, "--ideal", "4", "--element", "x;y"]
    )
    assert code == 2
    code, _, _ = invoke(capsys, ["order", "--ring", str(path) + ".nope", "--ideal", "1"])
    assert code == 2


def test_unknown_command_exit_2(ring_file, capsys):
    path = ring_file("z12.ring", Z12)
    code, _, _ = invoke(capsys, ["frobnicate", "--ring", path])
    assert code == 2


def test_precondition_exit_3(ring_file, capsys):
    path = ring_file("z12.ring", Z12)
    code, _, err = invoke(capsys, ["inverse", "--ring", path, "--element", "4"])
    assert code == 3
    code, _, err = invoke(capsys, ["prime", "--ring", path, "--ideal", "1"])
    assert code == 3


def test_witness(ring_file, capsys):
    path = ring_file("z12.ring", Z12)
    code, out, _ = invoke(
        capsys, ["witness", "--ring", path, "--ideal", "4", "--element", "8", "--json"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["verified"] is True


def test_member_and_order_and_identities(ring_file, capsys):
    path = ring_file("z12.ring", Z12)
    code, out, _ = invoke(
        capsys, ["member", "--ring", path, "--ideal", "4", "--element", "8", "--json"]
    )
    assert json.loads(out)["result"]["member"] is True
    code, out, _ = invoke(capsys, ["ring-order", "--ring", path, "--json"])
    assert json.loads(out)["result"]["order"] == 12
    code, out, _ = invoke(capsys, ["one", "--ring", path, "--json"])
    assert json.loads(out)["result"]["one"] == "1"
    code, out, _ = invoke(capsys, ["zero", "--ring", path, "--json"])
    assert json.loads(out)["result"]["zero"] == "0"
    code, out, _ = invoke(capsys, ["neg", "--ring", path, "--element", "4", "--json"])
    assert json.loads(out)["result"]["neg"] == "8"


def test_intersect_colon_annihilate(ring_file, capsys):
    path = ring_file("z12.ring", Z12)
    code, out, _ = invoke(
        capsys,
        ["intersect", "--ring", path, "--ideal", "2", "--ideal2", "3", "--json"],
    )
    assert json.loads(out)["result"]["order"] == 2
    code, out, _ = invoke(
        capsys, ["colon", "--ring", path, "--ideal", "4", "--ideal2", "2", "--json"]
    )
    assert json.loads(out)["result"]["order"] == 6
    code, out, _ = invoke(
        capsys, ["annihilate", "--ring", path, "--elements", "4", "--json"]
    )
    assert json.loads(out)["result"]["order"] == 4


def test_hom_commands(ring_file, capsys):
    p12 = ring_file("z12.ring", Z12)
    p6 = ring_file("z6.ring", Z6)
    code, out, _ = invoke(
        capsys,
        ["hom-kernel", "--ring", p12, "--ring2", p6, "--hom", "mod", "--json"],
    )
    assert code == 0
    assert json.loads(out)["result"]["order"] == 2
    code, out, _ = invoke(
        capsys,
        ["hom-injective", "--ring", p12, "--ring2", p6, "--hom", "mod", "--json"],
    )
    assert json.loads(out)["result"]["injective"] is False
    code, out, _ = invoke(
        capsys,
        ["hom-surjective", "--ring", p12, "--ring2", p6, "--hom", "mod", "--json"],
    )
    assert json.loads(out)["result"]["surjective"] is True


def test_verify_flag_all_green(ring_file, capsys):
    path = ring_file("z12.ring", Z12)
    checks = [
        ["basis", "--ring", path, "--ideal", "4", "--verify"],
        ["order", "--ring", path, "--ideal", "6", "--verify"],
        ["ring-order", "--ring", path, "--verify"],
        ["equal", "--ring", path, "--ideal", "2", "--ideal2", "10", "--verify"],
        ["member", "--ring", path, "--ideal", "4", "--element", "2", "--verify"],
        ["intersect", "--ring", path, "--ideal", "2", "--ideal2", "3", "--verify"],
        ["colon", "--ring", path, "--ideal", "4", "--ideal2", "2", "--verify"],
        ["annihilate", "--ring", path, "--elements", "4", "--verify"],
        ["unit", "--ring", path, "--element", "7", "--verify"],
        ["inverse", "--ring", path, "--element", "7", "--verify"],
        ["one", "--ring", path, "--verify"],
        ["zero", "--ring", path, "--verify"],
        ["neg", "--ring", path, "--element", "9", "--verify"],
        ["solve", "--ring", path, "--a", "4", "--b", "8", "--verify"],
        ["prime", "--ring", path, "--ideal", "2", "--verify"],
    ]
    for argv in checks:
        code, out, err = invoke(capsys, argv)
        assert code == 0, (argv, err)


def test_determinism_byte_identical(ring_file, capsys):
    path = ring_file("z12.ring", Z12)
    for backend in ("exact", "sampled"):
        argv = [
            "basis",
            "--ring",
            path,
            "--ideal",
            "4,6",
            "--json",
            "--seed",
            "99",
            "--backend",
            backend,
        ]
        _, out1, _ = invoke(capsys, argv)
        _, out2, _ = invoke(capsys, argv)
        assert out1 == out2


def test_seed_env_override(ring_file, capsys, monkeypatch):
    path = ring_file("z12.ring", Z12)
    monkeypatch.setenv("RINGBOX_SEED", "7")
    _, out_env, _ = invoke(capsys, ["zero", "--ring", path, "--json"])
    assert json.loads(out_env)["seed"] == 7
    _, out_flag, _ = invoke(capsys, ["zero", "--ring", path, "--json", "--seed", "3"])
    assert json.loads(out_flag)["seed"] == 3


def test_bench_single_row():
    cfg = RunConfig(command="bench-queries", family="modular", k_min=5, k_max=5)
    rows, exponent = bench_queries(cfg)
    assert len(rows) == 1
    assert rows[0]["k"] == 5
    assert rows[0]["brute_total"] >= 2**5
    assert exponent == 0.0


def test_fit_exponent_recovers_power_law():
    ks = list(range(4, 15))
    totals = [3 * k**2 for k in ks]
    assert abs(fit_exponent(ks, totals) - 2.0) < 1e-9


def test_matrix_generator_lists(ring_file, capsys):
    path = ring_file("m2z2.ring", M2Z2)
    code, out, err = invoke(
        capsys,
        [
            "order",
            "--ring",
            path,
            "--ideal",
            "1,0;0,0;;0,0;0,1",
            "--side",
            "left",
            "--json",
            "--verify",
        ],
    )
    assert code == 0, err
    assert json.loads(out)["result"]["order"] == 16


def test_debug_codes_flag(ring_file, capsys):
    path = ring_file("z12.ring", Z12)
    _, out, _ = invoke(
        capsys, ["basis", "--ring", path, "--ideal", "4", "--json", "--debug-codes"]
    )
    assert "codes" in json.loads(out)["result"]
    _, out, _ = invoke(capsys, ["basis", "--ring", path, "--ideal", "4", "--json"])
    assert "codes" not in json.loads(out)["result"]
