"""Second-order jets and small metric linear algebra.

A `Jet` carries the value, gradient and Hessian of a scalar quantity with
respect to a fixed set of chart coordinates.  All arithmetic propagates
derivatives exactly (to rounding), so downstream curvature computations never
rely on finite differences.  The module also provides metric Gram-Schmidt and
metric-orthogonal projection for the frame constructions.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ContractViolationError, DegeneracyError, EvalDomainError

__all__ = [
    "Jet",
    "BilinearForm",
    "jet_eval",
    "gram_schmidt",
    "gram_schmidt_coeffs",
    "complete_frame",
    "project",
]


class Jet:
    """Truncated second-order Taylor expansion: value, gradient, Hessian.

    Immutable by convention; arithmetic allocates fresh arrays.  The Hessian
    is kept exactly symmetric because every constructor builds it from
    symmetric pieces.
    """

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess):
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)

    @classmethod
    def constant(cls, value, nvars):
        return cls(value, np.zeros(nvars), np.zeros((nvars, nvars)))

    @classmethod
    def variable(cls, value, index, nvars):
        grad = np.zeros(nvars)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((nvars, nvars)))

    @property
    def nvars(self):
        return self.grad.shape[0]

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        if isinstance(other, (int, float)):
            return Jet.constant(float(other), self.nvars)
        return None

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Jet(self.value + o.value, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Jet(self.value - o.value, self.grad - o.grad, self.hess - o.hess)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Jet(-self.value, -self.grad, -self.hess)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        cross = np.outer(self.grad, o.grad)
        return Jet(
            self.value * o.value,
            self.value * o.grad + o.value * self.grad,
            self.value * o.hess + o.value * self.hess + cross + cross.T,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.value == 0.0:
            raise EvalDomainError("division by zero")
        return self * o._reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def _reciprocal(self):
        v = self.value
        return self._chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))

    def __pow__(self, exponent):
        if isinstance(exponent, int) or (
            isinstance(exponent, float) and exponent.is_integer()
        ):
            return self._int_pow(int(exponent))
        if isinstance(exponent, Jet):
            # real exponent with variable power: b^e = exp(e log b)
            return jet_exp(exponent * jet_log(self))
        return jet_exp(float(exponent) * jet_log(self))

    def _int_pow(self, k):
        if k < 0:
            return (self._int_pow(-k))._reciprocal()
        result = Jet.constant(1.0, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- unary chain rule -------------------------------------------------

    def _chain(self, f, df, d2f):
        """Compose with a scalar function given f(v), f'(v), f''(v)."""
        gg = np.outer(self.grad, self.grad)
        return Jet(f, df * self.grad, df * self.hess + d2f * gg)

    def __repr__(self):
        return f"Jet(value={self.value!r}, grad={self.grad!r})"


def jet_sin(x):
    if isinstance(x, Jet):
        return x._chain(math.sin(x.value), math.cos(x.value), -math.sin(x.value))
    return math.sin(x)


def jet_cos(x):
    if isinstance(x, Jet):
        return x._chain(math.cos(x.value), -math.sin(x.value), -math.cos(x.value))
    return math.cos(x)


def jet_exp(x):
    if isinstance(x, Jet):
        e = math.exp(x.value)
        return x._chain(e, e, e)
    return math.exp(x)


def jet_log(x):
    if isinstance(x, Jet):
        v = x.value
        if v <= 0.0:
            raise EvalDomainError(f"log of non-positive value {v}")
        return x._chain(math.log(v), 1.0 / v, -1.0 / (v * v))
    if x <= 0.0:
        raise EvalDomainError(f"log of non-positive value {x}")
    return math.log(x)


def jet_sqrt(x):
    if isinstance(x, Jet):
        v = x.value
        if v <= 0.0:
            raise EvalDomainError(f"sqrt of non-positive value {v}")
        r = math.sqrt(v)
        return x._chain(r, 0.5 / r, -0.25 / (r * v))
    if x <= 0.0:
        raise EvalDomainError(f"sqrt of non-positive value {x}")
    return math.sqrt(x)


def jet_eval(coordinate_map, point):
    """Evaluate a coordinate map at `point`, returning one Jet per output.

    `coordinate_map` is any callable taking a list of Jets (one per input
    variable) and returning an iterable of Jets or numbers.
    """
    point = np.asarray(point, dtype=float)
    n = point.shape[0]
    seeds = [Jet.variable(point[i], i, n) for i in range(n)]
    outputs = coordinate_map(seeds)
    result = []
    for out in outputs:
        if not isinstance(out, Jet):
            out = Jet.constant(float(out), n)
        result.append(out)
    return result


class BilinearForm:
    """A symmetric bilinear form given by its matrix at a point."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ContractViolationError("bilinear form matrix must be square")
        # symmetrize once; inputs are built symmetric, this guards rounding
        self.matrix = 0.5 * (m + m.T)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def inner(self, u, v):
        return float(np.asarray(u) @ self.matrix @ np.asarray(v))

    def norm(self, u):
        q = self.inner(u, u)
        return math.sqrt(max(q, 0.0))

    def is_positive_definite(self):
        try:
            np.linalg.cholesky(self.matrix)
            return True
        except np.linalg.LinAlgError:
            return False


def identity_form(n):
    return BilinearForm(np.eye(n))


_RANK_TOL = 1e-10


def gram_schmidt_coeffs(vectors, g, *, skip_degenerate=False):
    """Classical Gram-Schmidt with one re-orthogonalization pass.

    Returns (frame, coeffs, kept) where frame[i] = coeffs[i] @ stacked inputs
    and kept lists the indices of inputs that produced a frame vector.  With
    skip_degenerate=False a near-zero pivot raises DegeneracyError.
    """
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    if not vecs:
        return [], np.zeros((0, 0)), []
    scale = max(g.norm(v) for v in vecs)
    if scale == 0.0:
        raise DegeneracyError("all input vectors are zero", index=0)
    frame = []
    coeff_rows = []
    kept = []
    m = len(vecs)
    for i, v in enumerate(vecs):
        w = v.copy()
        row = np.zeros(m)
        row[i] = 1.0
        for _ in range(2):  # second pass tightens orthogonality to ~1e-15
            for f, frow in zip(frame, coeff_rows):
                c = g.inner(w, f)
                w = w - c * f
                row = row - c * frow
        norm = g.norm(w)
        if norm < _RANK_TOL * scale:
            if skip_degenerate:
                continue
            raise DegeneracyError(
                f"rank deficiency at input index {i} (pivot {norm:.3e})", index=i
            )
        frame.append(w / norm)
        coeff_rows.append(row / norm)
        kept.append(i)
    return frame, np.array(coeff_rows), kept


def gram_schmidt(vectors, g):
    """Metric-orthonormal frame spanning the same subspace, input order kept."""
    frame, _, _ = gram_schmidt_coeffs(vectors, g)
    return frame


def complete_frame(frame, candidates, g):
    """Extend an orthonormal `frame` by orthonormalized `candidates`.

    Near-degenerate candidates (already in the span) are skipped.  Returns
    only the new vectors, in candidate order.
    """
    vecs = list(frame) + [np.asarray(c, dtype=float) for c in candidates]
    full, _, kept = gram_schmidt_coeffs(vecs, g, skip_degenerate=True)
    return [f for f, i in zip(full, kept) if i >= len(frame)]


_ORTHONORMAL_TOL = 1e-8


def check_orthonormal(frame, g, tol=_ORTHONORMAL_TOL):
    frame = [np.asarray(f, dtype=float) for f in frame]
    k = len(frame)
    gram = np.array([[g.inner(a, b) for b in frame] for a in frame])
    return float(np.max(np.abs(gram - np.eye(k)))) <= tol if k else True


def project(v, frame, g):
    """g-orthogonal projection of v onto the span of an orthonormal frame."""
    if not check_orthonormal(frame, g):
        raise ContractViolationError("projection frame is not g-orthonormal")
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    for f in frame:
        out = out + g.inner(v, f) * np.asarray(f)
    return out
