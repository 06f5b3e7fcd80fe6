"""Exact integer linear algebra: Smith normal form and lattice membership.

Everything here works on plain Python ints (arbitrary precision), with
matrices as lists of row lists.  Matrix sizes in this package are tiny
(tens of rows/columns), so the textbook pivoting algorithm is fine.
"""

from __future__ import annotations


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    rb = len(b)
    cb = len(b[0]) if rb else 0
    out = []
    for row in a:
        acc = [0] * cb
        for x, brow in zip(row, b):
            if x:
                for j, y in enumerate(brow):
                    acc[j] += x * y
        out.append(acc)
    return out


def mat_vec(v, a):
    """Row vector times matrix."""
    n = len(a[0]) if a else 0
    acc = [0] * n
    for x, row in zip(v, a):
        if x:
            for j, y in enumerate(row):
                acc[j] += x * y
    return acc


class SmithNormalForm:
    """U * A * V = D with U, V unimodular and d1 | d2 | ... | dk >= 0.

    Attributes: d (diagonal as a list, length min(rows, cols)), U, V and
    Vinv (the tracked inverse of V, so no separate matrix inversion is
    needed downstream).
    """

    def __init__(self, matrix):
        rows = len(matrix)
        cols = len(matrix[0]) if rows else 0
        a = [list(r) for r in matrix]
        self.rows, self.cols = rows, cols
        self.U = identity_matrix(rows)
        self.V = identity_matrix(cols)
        self.Vinv = identity_matrix(cols)
        self._reduce(a)
        self.d = [a[i][i] for i in range(min(rows, cols))]
        self.D = a
        self.rank = sum(1 for x in self.d if x != 0)

    # row/column elementary operations, with transform bookkeeping

    def _row_addmul(self, a, i, j, q):
        # row_i += q * row_j
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
        self.U[i] = [x + q * y for x, y in zip(self.U[i], self.U[j])]

    def _col_addmul(self, a, i, j, q):
        # col_j += q * col_i ; V -> V*C, Vinv -> C^-1 * Vinv
        for row in a:
            row[j] += q * row[i]
        for row in self.V:
            row[j] += q * row[i]
        self.Vinv[i] = [x - q * y for x, y in zip(self.Vinv[i], self.Vinv[j])]

    def _row_swap(self, a, i, j):
        a[i], a[j] = a[j], a[i]
        self.U[i], self.U[j] = self.U[j], self.U[i]

    def _col_swap(self, a, i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in self.V:
            row[i], row[j] = row[j], row[i]
        self.Vinv[i], self.Vinv[j] = self.Vinv[j], self.Vinv[i]

    def _row_negate(self, a, i):
        a[i] = [-x for x in a[i]]
        self.U[i] = [-x for x in self.U[i]]

    def _reduce(self, a):
        rows, cols = self.rows, self.cols
        t = 0
        while t < min(rows, cols):
            # locate pivot of minimal absolute value in a[t:, t:]
            piv = None
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    v = a[i][j]
                    if v and (best is None or abs(v) < best):
                        best, piv = abs(v), (i, j)
            if piv is None:
                break
            self._row_swap(a, t, piv[0])
            self._col_swap(a, t, piv[1])
            # clear row t and column t
            dirty = True
            while dirty:
                dirty = False
                for i in range(t + 1, rows):
                    if a[i][t]:
                        q = a[i][t] // a[t][t]
                        self._row_addmul(a, i, t, -q)
                        if a[i][t]:
                            self._row_swap(a, t, i)
                            dirty = True
                for j in range(t + 1, cols):
                    if a[t][j]:
                        q = a[t][j] // a[t][t]
                        self._col_addmul(a, t, j, -q)
                        if a[t][j]:
                            self._col_swap(a, t, j)
                            dirty = True
            # enforce divisibility of the remaining block by a[t][t]
            fix = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % a[t][t]:
                        fix = i
                        break
                if fix is not None:
                    break
            if fix is not None:
                self._row_addmul(a, t, fix, 1)
                continue  # redo position t
            if a[t][t] < 0:
                self._row_negate(a, t)
            t += 1


def smith_normal_form(matrix):
    """Return (D, U, V) with U*A*V = D diagonal, d1 | d2 | ..."""
    snf = SmithNormalForm(matrix)
    return snf.D, snf.U, snf.V


def lattice_membership(snf: SmithNormalForm, vec) -> list[int] | None:
    """If vec lies in the row span of the SNF'd matrix, return z with
    z*A = vec, else None."""
    y = mat_vec(vec, snf.V)
    w = [0] * snf.rows
    for i, yi in enumerate(y):
        di = snf.d[i] if i < len(snf.d) else 0
        if di == 0:
            if yi != 0:
                return None
        else:
            if yi % di:
                return None
            if i < snf.rows:
                w[i] = yi // di
    return mat_vec(w, snf.U)
