"""Exact integer linear algebra: Smith/Hermite forms and linear solvers.

Everything here is arbitrary-precision and deterministic.  Pivots are chosen
smallest-in-absolute-value (ties broken by lowest row, then column) to damp
coefficient growth; no asymptotic optimality is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

from .errors import DimensionError

__all__ = [
    "IntMatrix",
    "SNFResult",
    "DiophantineResult",
    "smith_normal_form",
    "solve_diophantine",
    "solve_modular",
    "LatticeBuilder",
    "lattice_kernel_mod",
    "subgroup_of_torus",
    "egcd",
    "factorize",
    "euler_phi",
]


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk scale)."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n).items():
        phi *= (p - 1) * p ** (e - 1)
    return phi


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major entries."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"entry count {len(self.entries)} != {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        rows = [list(r) for r in rows]
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        if any(len(r) != n_cols for r in rows):
            raise DimensionError("ragged rows")
        return cls(n_rows, n_cols, tuple(v for r in rows for v in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def matmul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError("matmul shape mismatch")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.at(k, j) for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vec) -> tuple[int, ...]:
        vec = tuple(vec)
        if len(vec) != self.cols:
            raise DimensionError("vector length mismatch")
        return tuple(
            sum(self.at(i, k) * vec[k] for k in range(self.cols))
            for i in range(self.rows)
        )

    def is_diagonal(self) -> bool:
        return all(
            self.at(i, j) == 0
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )


@dataclass(frozen=True)
class SNFResult:
    """U*A*V = D with U, V unimodular and D diagonal, d_1 | d_2 | ...

    u_inv and v_inv are the exact inverses, tracked during reduction.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    u_inv: IntMatrix
    v_inv: IntMatrix

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D.at(i, i) for i in range(min(self.D.rows, self.D.cols)))

    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d != 0)


def smith_normal_form(a: IntMatrix) -> SNFResult:
    """Diagonalize over Z by unimodular row/column operations."""
    m, n = a.rows, a.cols
    M = a.to_rows()
    U = IntMatrix.identity(m).to_rows()
    Ui = IntMatrix.identity(m).to_rows()
    V = IntMatrix.identity(n).to_rows()
    Vi = IntMatrix.identity(n).to_rows()

    def row_add(i, j, k):  # row_i += k*row_j
        Mi, Mj = M[i], M[j]
        for c in range(n):
            Mi[c] += k * Mj[c]
        Uii, Ujj = U[i], U[j]
        for c in range(m):
            Uii[c] += k * Ujj[c]
        for r in range(m):  # inverse: col_j -= k*col_i
            Ui[r][j] -= k * Ui[r][i]

    def row_swap(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]
        for r in range(m):
            Ui[r][i], Ui[r][j] = Ui[r][j], Ui[r][i]

    def row_neg(i):
        M[i] = [-v for v in M[i]]
        U[i] = [-v for v in U[i]]
        for r in range(m):
            Ui[r][i] = -Ui[r][i]

    def col_add(j, i, k):  # col_j += k*col_i
        for r in range(m):
            M[r][j] += k * M[r][i]
        for r in range(n):
            V[r][j] += k * V[r][i]
        Vij, Vii = Vi[j], Vi[i]  # inverse: row_i -= k*row_j
        for c in range(n):
            Vii[c] -= k * Vij[c]

    def col_swap(i, j):
        for r in range(m):
            M[r][i], M[r][j] = M[r][j], M[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def col_neg(j):
        for r in range(m):
            M[r][j] = -M[r][j]
        for r in range(n):
            V[r][j] = -V[r][j]
        Vi[j] = [-v for v in Vi[j]]

    def smallest_nonzero(t):
        best = None
        for i in range(t, m):
            Mi = M[i]
            for j in range(t, n):
                v = Mi[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        return best

    t = 0
    while t < min(m, n):
        if smallest_nonzero(t) is None:
            break
        while True:
            # always pivot on the smallest entry of the working submatrix
            _, bi, bj = smallest_nonzero(t)
            if bi != t:
                row_swap(t, bi)
            if bj != t:
                col_swap(t, bj)
            if M[t][t] < 0:
                row_neg(t)
            p = M[t][t]
            clean = True
            for i in range(t + 1, m):
                if M[i][t]:
                    q = M[i][t] // p
                    if q:
                        row_add(i, t, -q)
                    if M[i][t]:  # remainder in (0, p), next pass pivots on it
                        clean = False
            for j in range(t + 1, n):
                if M[t][j]:
                    q = M[t][j] // p
                    if q:
                        col_add(j, t, -q)
                    if M[t][j]:
                        clean = False
            if not clean:
                continue
            offender = None
            for i in range(t + 1, m):
                Mi = M[i]
                for j in range(t + 1, n):
                    if Mi[j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, 1)
        t += 1

    return SNFResult(
        U=IntMatrix.from_rows(U) if m else IntMatrix.zeros(0, 0),
        D=IntMatrix.from_rows(M) if m and n else IntMatrix.zeros(m, n),
        V=IntMatrix.from_rows(V) if n else IntMatrix.zeros(0, 0),
        u_inv=IntMatrix.from_rows(Ui) if m else IntMatrix.zeros(0, 0),
        v_inv=IntMatrix.from_rows(Vi) if n else IntMatrix.zeros(0, 0),
    )


@dataclass(frozen=True)
class DiophantineResult:
    """Outcome of an integer linear system A*x = b.

    When unsolvable, ``certificate`` is (u, g, v): a row vector u with
    u*A == 0 (mod g) entrywise while v = u*b !== 0 (mod g); g == 0 means
    exact-zero row (u*A == 0, u*b != 0).
    """

    solution: tuple[int, ...] | None
    kernel: tuple[tuple[int, ...], ...]
    certificate: tuple[tuple[int, ...], int, int] | None = None

    def __bool__(self) -> bool:
        return self.solution is not None


def solve_diophantine(a: IntMatrix, b) -> DiophantineResult:
    """Solve A*x = b over the integers; kernel basis spans all homogeneous solutions."""
    b = tuple(b)
    if len(b) != a.rows:
        raise DimensionError("rhs length != row count")
    snf = smith_normal_form(a)
    d = snf.diagonal()
    r = snf.rank()
    ub = snf.U.apply(b)
    kernel = tuple(snf.V.col(j) for j in range(r, a.cols))
    y = [0] * a.cols
    for i in range(a.rows):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if ub[i] != 0:
                return DiophantineResult(None, kernel, (snf.U.row(i), 0, ub[i]))
        else:
            if ub[i] % di:
                return DiophantineResult(None, kernel, (snf.U.row(i), di, ub[i]))
            if i < a.cols:
                y[i] = ub[i] // di
    x = snf.V.apply(y)
    return DiophantineResult(x, kernel, None)


def solve_modular(a: IntMatrix, b, moduli) -> tuple[int, ...] | None:
    """Solve the simultaneous congruences sum_j A[i][j]*x_j = b_i (mod moduli[i]).

    Reduced to an integer system by adjoining one slack unknown per row;
    each x_j is canonicalized into [0, effective modulus of column j).
    """
    b = tuple(b)
    moduli = tuple(moduli)
    if len(b) != a.rows or len(moduli) != a.rows:
        raise DimensionError("rhs/moduli length != row count")
    if any(s <= 0 for s in moduli):
        raise ValueError("moduli must be positive")
    m, n = a.rows, a.cols
    aug_rows = []
    for i in range(m):
        row = list(a.row(i)) + [0] * m
        row[n + i] = moduli[i]
        aug_rows.append(row)
    if not aug_rows:
        return ()
    res = solve_diophantine(IntMatrix.from_rows(aug_rows), b)
    if not res:
        return None
    x = list(res.solution[:n])
    for j in range(n):
        eff = 1
        for i in range(m):
            aij = a.at(i, j)
            eff = lcm(eff, moduli[i] // gcd(moduli[i], aij))
        x[j] %= eff
    return tuple(x)


class LatticeBuilder:
    """Incremental column Hermite form for a full-dimension-friendly lattice in Z^k.

    Vectors are accumulated one at a time; ``basis_columns`` returns the
    canonical echelon basis (positive pivots, cross entries reduced into
    [0, pivot)).  Seeding with moduli inserts s_j * e_j so the lattice always
    contains the ambient torus relations.
    """

    def __init__(self, dim: int, seed_moduli=None):
        self.dim = dim
        self._pivots: dict[int, list[int]] = {}
        if seed_moduli is not None:
            if len(tuple(seed_moduli)) != dim:
                raise DimensionError("seed moduli length != dim")
            for j, s in enumerate(seed_moduli):
                if s:
                    vec = [0] * dim
                    vec[j] = abs(s)
                    self.add(vec)

    def add(self, vec) -> bool:
        """Insert a vector; returns True if the lattice grew."""
        v = list(vec)
        if len(v) != self.dim:
            raise DimensionError("vector length != dim")
        changed = False
        for r in range(self.dim):
            if v[r] == 0:
                continue
            piv = self._pivots.get(r)
            if piv is None:
                if v[r] < 0:
                    v = [-t for t in v]
                self._pivots[r] = v
                return True
            pr, vr = piv[r], v[r]
            if vr % pr == 0:
                q = vr // pr
                v = [t - q * p for t, p in zip(v, piv)]
            else:
                g, x, y = egcd(pr, vr)
                new_piv = [x * p + y * t for p, t in zip(piv, v)]
                v = [(pr // g) * t - (vr // g) * p for t, p in zip(v, piv)]
                self._pivots[r] = new_piv
                changed = True
        return changed

    def pivot_rows(self) -> list[int]:
        return sorted(self._pivots)

    def _canonicalize(self):
        rows = self.pivot_rows()
        for r in rows:
            piv = self._pivots[r]
            for r2 in rows:
                if r2 >= r:
                    continue
                other = self._pivots[r2]
                if other[r]:
                    q = other[r] // piv[r]
                    if q:
                        self._pivots[r2] = [a - q * b for a, b in zip(other, piv)]

    def basis_columns(self) -> tuple[tuple[int, ...], ...]:
        self._canonicalize()
        return tuple(tuple(self._pivots[r]) for r in self.pivot_rows())

    def reduce(self, vec) -> tuple[int, ...]:
        """Canonical residue of vec modulo the lattice (needs full rank for
        residues to be canonical coset labels)."""
        v = list(vec)
        if len(v) != self.dim:
            raise DimensionError("vector length != dim")
        for r in self.pivot_rows():
            piv = self._pivots[r]
            q = v[r] // piv[r]
            if q:
                v = [a - q * b for a, b in zip(v, piv)]
        return tuple(v)

    def contains(self, vec) -> bool:
        return all(t == 0 for t in self.reduce(vec))

    def determinant(self) -> int:
        """Index of the lattice in Z^dim (product of pivots; full rank only)."""
        if len(self._pivots) != self.dim:
            raise ValueError("lattice is not full rank")
        out = 1
        for r, piv in self._pivots.items():
            out *= piv[r]
        return out


def lattice_kernel_mod(w: IntMatrix, moduli) -> tuple[tuple[int, ...], ...]:
    """Basis of {z in Z^n : W*z == 0 (mod moduli[i]) rowwise}, canonical HNF."""
    moduli = tuple(moduli)
    if len(moduli) != w.rows:
        raise DimensionError("moduli length != row count")
    m, n = w.rows, w.cols
    if n == 0:
        return ()
    aug_rows = []
    for i in range(m):
        row = list(w.row(i)) + [0] * m
        row[n + i] = moduli[i]
        aug_rows.append(row)
    builder = LatticeBuilder(n)
    if m == 0:
        for j in range(n):
            e = [0] * n
            e[j] = 1
            builder.add(e)
        return builder.basis_columns()
    snf = smith_normal_form(IntMatrix.from_rows(aug_rows))
    for j in range(snf.rank(), n + m):
        builder.add(snf.V.col(j)[:n])
    return builder.basis_columns()


def subgroup_of_torus(gens, moduli) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Independent generators and ascending orders of the subgroup of
    Z_{m_1} x ... x Z_{m_k} generated by ``gens`` (coordinate vectors).

    Returns (new_gens, orders) with orders o_1 | o_2 | ... and the subgroup
    equal to the direct sum of the cyclic groups generated by new_gens.
    """
    moduli = tuple(moduli)
    gens = [tuple(g) for g in gens]
    k = len(moduli)
    if any(len(g) != k for g in gens):
        raise DimensionError("generator length != moduli length")
    if not gens:
        return (), ()
    t = len(gens)
    w = IntMatrix.from_rows([[g[r] for g in gens] for r in range(k)])
    relations = lattice_kernel_mod(w, moduli)
    rel_matrix = IntMatrix.from_rows([[col[i] for col in relations] for i in range(t)])
    snf = smith_normal_form(rel_matrix)
    new_gens = []
    orders = []
    for i in range(t):
        d = snf.D.at(i, i) if i < min(snf.D.rows, snf.D.cols) else 0
        if d == 1:
            continue
        coeffs = [snf.u_inv.at(j, i) for j in range(t)]
        vec = tuple(
            sum(coeffs[j] * gens[j][r] for j in range(t)) % moduli[r] if moduli[r] else 0
            for r in range(k)
        )
        new_gens.append(vec)
        orders.append(d)
    return tuple(new_gens), tuple(orders)
