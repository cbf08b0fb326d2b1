"""Independent Hom/E dimensions for complexes over the A_n path category.

Morphisms between sums of projectives are scalar matrices whose entry
(t, s) may be nonzero only when Hom(P_src[s], P_tgt[t]) != 0, i.e.
src[s] <= tgt[t]; all structure constants are 1, so composition is
matrix multiplication.  Unknowns are ordered differently from the
library (degrees descending, entries column-major).
"""

from sympy import Matrix, zeros


class Cx:
    def __init__(self, terms, diffs=None):
        self.terms = {d: list(v) for d, v in terms.items() if v}
        self.diffs = {d: Matrix(m) for d, m in (diffs or {}).items()}

    def term(self, d):
        return self.terms.get(d, [])

    def diff(self, d):
        if d in self.diffs:
            return self.diffs[d]
        return zeros(len(self.term(d + 1)), len(self.term(d)))

    def shift(self, k):
        sign = -1 if k % 2 else 1
        return Cx({d - k: v for d, v in self.terms.items()},
                  {d - k: sign * m for d, m in self.diffs.items()})

    def degrees(self):
        return set(self.terms)


def _slots(src, tgt):
    return [(t, s) for s in reversed(range(len(src))) for t in range(len(tgt)) if src[s] <= tgt[t]]


def _assemble(slots, rows, cols, values):
    m = zeros(rows, cols)
    for (t, s), v in zip(slots, values):
        m[t, s] = v
    return m


def hom_k_dim(X, Y):
    """dim of chain maps X -> Y modulo null-homotopic ones."""
    degs = sorted(X.degrees() | Y.degrees(), reverse=True)
    fslots = {d: _slots(X.term(d), Y.term(d)) for d in degs}
    hslots = {d: _slots(X.term(d), Y.term(d - 1)) for d in degs}
    foff, acc = {}, 0
    for d in degs:
        foff[d] = acc
        acc += len(fslots[d])
    nf = acc
    if nf == 0:
        return 0
    eqs = []
    for d in degs:
        rows = len(Y.term(d + 1)) * len(X.term(d))
        if not rows:
            continue
        block = zeros(rows, nf)
        for k in range(nf):
            vals = [0] * nf
            vals[k] = 1
            fd = _assemble(fslots[d], len(Y.term(d)), len(X.term(d)),
                           vals[foff[d]:foff[d] + len(fslots[d])])
            fd1 = _assemble(fslots.get(d + 1, []), len(Y.term(d + 1)), len(X.term(d + 1)),
                            vals[foff[d + 1]:foff[d + 1] + len(fslots[d + 1])] if d + 1 in foff else [])
            col = Y.diff(d) * fd - fd1 * X.diff(d)
            block[:, k] = col.reshape(rows, 1)
        eqs.append(block)
    cycles = nf - (Matrix.vstack(*eqs).rank() if eqs else 0)
    hcols = []
    for d in degs:
        for idx in range(len(hslots[d])):
            vals = [0] * len(hslots[d])
            vals[idx] = 1
            h = _assemble(hslots[d], len(Y.term(d - 1)), len(X.term(d)), vals)
            col = zeros(nf, 1)
            # contributes d_Y h to f^d and h d_X to f^{d-1}
            for e, piece in ((d, Y.diff(d - 1) * h), (d - 1, h * X.diff(d - 1))):
                if e not in foff:
                    continue
                for r, (t, s) in enumerate(fslots[e]):
                    col[foff[e] + r] = piece[t, s]
            hcols.append(col)
    bounds = Matrix.hstack(*hcols).rank() if hcols else 0
    return cycles - bounds


def stalk(i, d=0):
    return Cx({d: [i]})


def two_term(i, j, low=-1, sign=1):
    return Cx({low: [i], low + 1: [j]}, {low: [[sign]]})


def two_term_family(n):
    out = {}
    for i in range(n):
        out[f"P{i + 1}"] = stalk(i, 0)
    for i in range(n):
        out[f"P{i + 1}[1]"] = stalk(i, -1)
    for i in range(n):
        for j in range(i + 1, n):
            out[f"(P{i + 1}->P{j + 1})"] = two_term(i, j)
    return out


A4SUB = {"3[-1]": two_term(1, 2, low=0, sign=-1), "2": two_term(0, 1),
         "[4;3;2]": two_term(0, 3), "[4;3]": two_term(1, 3)}


def extclosed(m=1):
    sign = -1 if m % 2 else 1
    return {"1[1]": stalk(0, -1), f"[3;2][-{m}]": Cx({m - 1: [0], m: [2]}, {m - 1: [[sign]]})}


def is_chain_map(X, Y, f):
    degs = X.degrees() | Y.degrees()
    for d in degs:
        lhs = Y.diff(d) * _get(f, d, X, Y)
        rhs = _get(f, d + 1, X, Y) * X.diff(d)
        if lhs != rhs:
            return False
    return True


def _get(f, d, X, Y):
    return f.get(d, zeros(len(Y.term(d)), len(X.term(d))))


def is_null_homotopic(X, Y, f):
    """f^d = d_Y h^d + h^{d+1} d_X for some h^d: X^d -> Y^{d-1}."""
    degs = sorted(X.degrees() | Y.degrees())
    hslots = {d: _slots(X.term(d), Y.term(d - 1)) for d in degs}
    targets = [(d, t, s) for d in degs for s in range(len(X.term(d))) for t in range(len(Y.term(d)))]
    cols = []
    for d in degs:
        for idx in range(len(hslots[d])):
            vals = [0] * len(hslots[d])
            vals[idx] = 1
            h = _assemble(hslots[d], len(Y.term(d - 1)), len(X.term(d)), vals)
            pieces = {d: Y.diff(d - 1) * h, d - 1: h * X.diff(d - 1)}
            col = zeros(len(targets), 1)
            for r, (e, t, s) in enumerate(targets):
                if e in pieces:
                    col[r] = pieces[e][t, s]
            cols.append(col)
    rhs = Matrix([_get(f, d, X, Y)[t, s] for d, t, s in targets])
    if not targets:
        return True
    H = Matrix.hstack(*cols) if cols else zeros(len(targets), 0)
    return H.rank() == Matrix.hstack(H, rhs).rank()


def compose(g, f, X, Y, Z):
    return {d: _get(g, d, Y, Z) * _get(f, d, X, Y) for d in X.degrees() | Y.degrees() | Z.degrees()}


def identity(X):
    from sympy import eye
    return {d: eye(len(v)) for d, v in X.terms.items()}


def minus(f, g, X, Y):
    return {d: _get(f, d, X, Y) - _get(g, d, X, Y) for d in X.degrees() | Y.degrees()}


def from_blocks_json(blocks, src, tgt):
    """Library block format: blocks[s][t] is the coefficient list of Hom(src[s], tgt[t])."""
    m = zeros(len(tgt), len(src))
    for s, row in enumerate(blocks):
        for t, coeffs in enumerate(row):
            if coeffs:
                m[t, s] = coeffs[0]
    return m


def from_json(data):
    terms = {int(d): [int(p[1:]) - 1 for p in v] for d, v in data["terms"].items()}
    diffs = {int(d): from_blocks_json(b, terms[int(d)], terms[int(d) + 1])
             for d, b in data["diffs"].items()}
    return Cx(terms, diffs)


def map_from_json(data, X, Y):
    return {int(d): from_blocks_json(b, X.term(int(d)), Y.term(int(d))) for d, b in data.items()}
