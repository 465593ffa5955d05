"""Smith normal form over the integers and K-theory of graph and Katsura algebras."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .graphs import DirectedGraph, SeparatedGraph, reduced_adjacency

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)] for i in range(len(a))]


def determinant(m: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> List[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(M: Sequence[Sequence[int]]) -> SmithDecomposition:
    """U, D, V with U*M*V = D, U and V unimodular, D diagonal with d_i | d_{i+1}.

    Pivots are chosen as the entry of least nonzero absolute value, ties
    broken row-major.
    """
    D = [[int(x) for x in row] for row in M]
    m = len(D)
    n = len(D[0]) if m else 0
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst += q * row src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return SmithDecomposition(U, D, V)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is not None:
                add_row(bad[0], t, 1)
                continue
            if p < 0:
                D[t] = [-x for x in D[t]]
                U[t] = [-x for x in U[t]]
            break
    return SmithDecomposition(U, D, V)


@dataclass(frozen=True)
class AbelianGroup:
    """Z^free_rank plus Z/d_1 + ... + Z/d_k in invariant-factor form."""

    free_rank: int
    torsion: Tuple[int, ...] = ()

    def to_json(self):
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def canonical_group(free_rank: int, orders: Sequence[int]) -> AbelianGroup:
    """Invariant-factor form of Z^r + sum Z/orders."""
    orders = [abs(d) for d in orders if abs(d) > 1]
    if not orders:
        return AbelianGroup(free_rank, ())
    diag = [[orders[i] if i == j else 0 for j in range(len(orders))] for i in range(len(orders))]
    factors = [d for d in smith_normal_form(diag).diagonal if d > 1]
    return AbelianGroup(free_rank, tuple(factors))


def cokernel(M: Sequence[Sequence[int]], rows: int) -> AbelianGroup:
    """Z^rows / image(M) for M of shape rows x cols."""
    if not M or not M[0]:
        return AbelianGroup(rows, ())
    snf = smith_normal_form(M)
    return AbelianGroup(rows - snf.rank, tuple(d for d in snf.diagonal if d > 1))


def kernel_rank(M: Sequence[Sequence[int]], cols: int) -> int:
    if not M or cols == 0:
        return cols
    return cols - smith_normal_form(M).rank


def direct_sum(a: AbelianGroup, b: AbelianGroup) -> AbelianGroup:
    return canonical_group(a.free_rank + b.free_rank, list(a.torsion) + list(b.torsion))


def graph_k_theory(g: DirectedGraph | SeparatedGraph) -> Tuple[AbelianGroup, AbelianGroup]:
    """K_0 = Coker and K_1 = Ker of I' - A'^T from Z^(non-sources) to Z^(vertices)."""
    if isinstance(g, SeparatedGraph):
        g = g.graph
    labels, rows = reduced_adjacency(g)
    idx = g.vertex_index()
    n = len(g.vertices)
    # column per non-source v: e_v - sum_w A(v, w) e_w
    M = [[0] * len(labels) for _ in range(n)]
    for c, (v, row) in enumerate(zip(labels, rows)):
        M[idx[v]][c] += 1
        for w_i, a in enumerate(row):
            M[w_i][c] -= a
    return cokernel(M, n), AbelianGroup(kernel_rank(M, len(labels)))


def katsura_k_theory(spec) -> Tuple[AbelianGroup, AbelianGroup]:
    """K_0 = Coker(I-A^T) + Ker(I-B^T) and K_1 = Coker(I-B^T) + Ker(I-A^T)."""
    from .selfsimilar import KatsuraSpec

    if not isinstance(spec, KatsuraSpec):
        spec = KatsuraSpec.from_json(spec)
    n = spec.size

    def i_minus_t(X):
        return [[int(i == j) - X[j][i] for j in range(n)] for i in range(n)]

    IA, IB = i_minus_t(spec.A), i_minus_t(spec.B)
    k0 = direct_sum(cokernel(IA, n), AbelianGroup(kernel_rank(IB, n)))
    k1 = direct_sum(cokernel(IB, n), AbelianGroup(kernel_rank(IA, n)))
    return k0, k1
