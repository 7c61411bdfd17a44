"""Naive reference implementations used to validate the optimized paths.

Nothing here shares code with the main arithmetic: dense boxes instead of
sparse dicts, exhaustive factorization towers instead of the Berlekamp-style
idempotent splitting, full enumeration instead of nullspace solving.  All
entry points carry hard size caps; these are test instruments, not tools.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import gfp
from .fields import ExtField, PrimeField, factor_squarefree


class OracleCapError(ValueError):
    pass


# ---------------------------------------------------------------------------
# dense polynomial boxes over F_p


class DensePolynomial:
    """Coefficients over F_p on a full exponent box [0, shape_i)."""

    def __init__(self, p, coeffs):
        self.p = p
        self.coeffs = np.array(coeffs, dtype=np.int64) % p

    @classmethod
    def zero(cls, p, shape):
        return cls(p, np.zeros(shape, dtype=np.int64))

    @classmethod
    def from_terms(cls, p, shape, terms):
        a = np.zeros(shape, dtype=np.int64)
        for exps, c in terms.items():
            a[tuple(exps)] = c % p
        return cls(p, a)

    def __eq__(self, other):
        return (
            self.p == other.p
            and self.coeffs.shape == other.coeffs.shape
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def terms(self):
        out = {}
        for idx in np.ndindex(self.coeffs.shape):
            if self.coeffs[idx]:
                out[idx] = int(self.coeffs[idx])
        return out


def dense_mul(a: DensePolynomial, b: DensePolynomial) -> DensePolynomial:
    if a.p != b.p or a.coeffs.shape != b.coeffs.shape:
        raise ValueError("window bounds incompatible")
    shape = a.coeffs.shape
    out = np.zeros(shape, dtype=np.int64)
    for ia in np.ndindex(shape):
        ca = a.coeffs[ia]
        if not ca:
            continue
        for ib in np.ndindex(shape):
            cb = b.coeffs[ib]
            if not cb:
                continue
            tgt = tuple(x + y for x, y in zip(ia, ib))
            if all(t < s for t, s in zip(tgt, shape)):
                out[tgt] = (out[tgt] + ca * cb) % a.p
    return DensePolynomial(a.p, out)


def dense_substitute(a: DensePolynomial, images) -> DensePolynomial:
    """Substitute variable i -> images[i] (each a DensePolynomial)."""
    shape = a.coeffs.shape
    p = a.p
    out = DensePolynomial.zero(p, shape)
    one = DensePolynomial.from_terms(p, shape, {(0,) * len(shape): 1})
    for idx in np.ndindex(shape):
        c = a.coeffs[idx]
        if not c:
            continue
        term = DensePolynomial(p, one.coeffs * c)
        for i, e in enumerate(idx):
            for _ in range(e):
                term = dense_mul(term, images[i])
        out = DensePolynomial(p, out.coeffs + term.coeffs)
    return out


# ---------------------------------------------------------------------------
# tensor-product splitting by exhaustive factorization


def crt_split(p, moduli):
    """Split GF(p)[y_1..y_s]/(m_i(y_i)) into field components.

    Walks the factors one at a time, factoring each modulus over every
    component field built so far (towers of ExtField), then expresses the
    primitive idempotents in the monomial basis by inverting the joint
    evaluation matrix.  Completely independent of the structure-tensor path.
    """
    degrees = [len(m) - 1 for m in moduli]
    N = 1
    for d in degrees:
        N *= d
    if N > 256:
        raise OracleCapError("degree cap exceeded")
    base = PrimeField(p)
    # components: (field, roots so far)  -- roots live in `field`
    comps = [(base, [])]
    for m in moduli:
        new_comps = []
        for field, roots in comps:
            poly = [field.from_prime_coords([c] + [0] * (field.degree - 1))
                    for c in m]
            for f in factor_squarefree(field, poly):
                if len(f) == 2:  # linear: y = -const
                    root = field.neg(field.mul(f[0], field.inv(f[1])))
                    new_comps.append((field, roots + [root]))
                else:
                    ext = ExtField(field, f, check=False)
                    lifted = [ext.from_base(r) for r in roots]
                    new_comps.append((ext, lifted + [ext.gen()]))
        comps = new_comps
    # evaluation matrix: monomial basis of the quotient -> stacked prime
    # coordinates of all components
    exp_ranges = [range(d) for d in degrees]
    basis = list(itertools.product(*exp_ranges))
    rows = []
    for field, roots in comps:
        root_powers = []
        for r, d in zip(roots, degrees):
            powers = [field.one()]
            for _ in range(d - 1):
                powers.append(field.mul(powers[-1], r))
            root_powers.append(powers)
        block = []
        for mono in basis:
            val = field.one()
            for i, e in enumerate(mono):
                val = field.mul(val, root_powers[i][e])
            block.append(field.to_prime_coords(val))
        rows.append(np.array(block, dtype=np.int64).T)  # coords x basis
    E = np.concatenate(rows, axis=0) % p
    Einv = gfp.inv_matrix(E, p)
    if Einv is None:
        raise AssertionError("evaluation matrix singular; components not coprime")
    idems = []
    offset = 0
    for field, _ in comps:
        d = field.degree
        target = np.zeros(E.shape[0], dtype=np.int64)
        target[offset : offset + d] = field.to_prime_coords(field.one())
        idems.append((Einv @ target) % p)
        offset += d
    order = sorted(range(len(comps)), key=lambda j: tuple(int(c) for c in idems[j]))
    return {
        "component_degrees": tuple(comps[j][0].degree for j in order),
        "idempotents": [idems[j] for j in order],
        "basis": basis,
    }


# ---------------------------------------------------------------------------
# exhaustive searches


def exhaustive_fixed_points(p, dim, operators):
    """All vectors v in F_p^dim with op(v) = v for every operator.

    Operators are arbitrary callables on numpy vectors (they need not be
    linear).  Hard cap: p^dim <= 2^20.
    """
    if p**dim > 2**20:
        raise OracleCapError("dimension too large for enumeration")
    fixed = []
    for combo in itertools.product(range(p), repeat=dim):
        v = np.array(combo, dtype=np.int64)
        if all(np.array_equal(np.asarray(op(v)) % p, v) for op in operators):
            fixed.append(v)
    return fixed


def exhaustive_inverse_search(a, window):
    """Solve a.x = 1 coefficientwise on the exponent box [0, window]^Delta.

    ``a`` is a LaurentElement with no poles.  Nonexistence of a solution on
    the box certifies that ``a`` is not a unit of the truncated ring.
    Returns ``(exists, x_or_None)``.
    """
    ring = a.ring
    alg = ring.coeffs
    p = alg.p
    nv = ring.nvars
    exps = list(itertools.product(range(window + 1), repeat=nv))
    pos = {e: i for i, e in enumerate(exps)}
    dim = len(exps) * alg.N
    if dim > 4096:
        raise OracleCapError("dimension too large")
    M = np.zeros((dim, dim), dtype=np.int64)
    for ea, ca in a.support.items():
        if min(ea) < 0:
            raise ValueError("pole-free elements only")
        amat = alg.fd_mul_matrix(ca.constant_fd())
        for ex in exps:
            tgt = tuple(x + y for x, y in zip(ea, ex))
            if tgt in pos:
                i, j = pos[tgt], pos[ex]
                M[i * alg.N : (i + 1) * alg.N, j * alg.N : (j + 1) * alg.N] += amat
    rhs = np.zeros(dim, dtype=np.int64)
    rhs[: alg.N] = alg.fd_one()
    sol = gfp.solve(M % p, rhs, p)
    if sol is None:
        return False, None
    out = ring.zero()
    for ex in exps:
        i = pos[ex]
        vec = sol[i * alg.N : (i + 1) * alg.N]
        if not alg.fd_is_zero(vec):
            out = out + ring.monomial(ex, alg.from_fdelta(vec))
    return True, out
