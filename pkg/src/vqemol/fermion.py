"""Fermionic ladder-operator algebra in second quantization.

Terms are kept in canonical normal order: every raising operator before every
lowering operator, mode indices descending within each group, anticommutation
signs absorbed into coefficients.  Reordering products generates the usual
contraction terms ({c_p, c†_q} = δ_pq), so operator identities like
c_p c†_p + c†_p c_p = 1 come out exactly.
"""

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class FermionTerm:
    """One product of ladder operators with a weight.

    ladder is a tuple of (mode, raising) pairs, applied right-to-left as an
    operator product (matching the written order c†_p c_q ...).
    """

    coefficient: complex
    ladder: tuple


class FermionOperator:
    """Sum of normal-ordered FermionTerms plus a constant."""

    __slots__ = ("n_modes", "terms", "constant")

    def __init__(self, n_modes, terms=(), constant=0.0):
        if n_modes < 1:
            raise ValueError(f"n_modes must be positive, got {n_modes}")
        acc = {}
        const = complex(constant)
        stack = []
        for item in terms:
            if isinstance(item, FermionTerm):
                ladder, coeff = item.ladder, item.coefficient
            else:
                ladder, coeff = item
            ladder = tuple((int(m), bool(r)) for m, r in ladder)
            for m, _ in ladder:
                if not 0 <= m < n_modes:
                    raise ValueError(f"mode {m} outside 0..{n_modes - 1}")
            stack.append((complex(coeff), ladder))
        # normal-order with a work stack; swaps spawn contraction terms
        while stack:
            coeff, ladder = stack.pop()
            if coeff == 0:
                continue
            k = _first_violation(ladder)
            if k is None:
                if ladder:
                    acc[ladder] = acc.get(ladder, 0.0) + coeff
                else:
                    const += coeff
                continue
            (mi, ri), (mj, rj) = ladder[k], ladder[k + 1]
            if ri == rj:
                if mi == mj:
                    continue  # c†c† or cc with equal modes vanishes
                swapped = ladder[:k] + ((mj, rj), (mi, ri)) + ladder[k + 2:]
                stack.append((-coeff, swapped))
            else:
                # lowering before raising: c_i c†_j = δ_ij - c†_j c_i
                swapped = ladder[:k] + ((mj, rj), (mi, ri)) + ladder[k + 2:]
                stack.append((-coeff, swapped))
                if mi == mj:
                    stack.append((coeff, ladder[:k] + ladder[k + 2:]))
        self.n_modes = n_modes
        self.terms = tuple(FermionTerm(acc[l], l) for l in sorted(acc) if acc[l] != 0)
        self.constant = const

    @classmethod
    def from_ladder(cls, n_modes, ladder, coefficient=1.0):
        return cls(n_modes, [(ladder, coefficient)])

    @property
    def num_terms(self):
        return len(self.terms)

    def simplify(self, drop_tol=1e-12):
        return FermionOperator(
            self.n_modes,
            [t for t in self.terms if abs(t.coefficient) >= drop_tol],
            self.constant if abs(self.constant) >= drop_tol else 0.0)

    def dagger(self):
        out = []
        for t in self.terms:
            rev = tuple((m, not r) for m, r in reversed(t.ladder))
            out.append((rev, t.coefficient.conjugate()))
        return FermionOperator(self.n_modes, out, self.constant.conjugate())

    def __add__(self, other):
        if isinstance(other, FermionOperator):
            if self.n_modes != other.n_modes:
                raise ValueError("mode-count mismatch")
            return FermionOperator(
                self.n_modes,
                [(t.ladder, t.coefficient) for t in self.terms]
                + [(t.ladder, t.coefficient) for t in other.terms],
                self.constant + other.constant)
        if isinstance(other, (int, float, complex)):
            return FermionOperator(self.n_modes,
                                   [(t.ladder, t.coefficient) for t in self.terms],
                                   self.constant + other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return FermionOperator(self.n_modes,
                                   [(t.ladder, t.coefficient * other) for t in self.terms],
                                   self.constant * other)
        if isinstance(other, FermionOperator):
            if self.n_modes != other.n_modes:
                raise ValueError("mode-count mismatch")
            prods = []
            for ta in self.terms:
                for tb in other.terms:
                    prods.append((ta.ladder + tb.ladder, ta.coefficient * tb.coefficient))
                if other.constant != 0:
                    prods.append((ta.ladder, ta.coefficient * other.constant))
            if self.constant != 0:
                for tb in other.terms:
                    prods.append((tb.ladder, self.constant * tb.coefficient))
            return FermionOperator(self.n_modes, prods, self.constant * other.constant)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        return (isinstance(other, FermionOperator) and self.n_modes == other.n_modes
                and self.constant == other.constant and self.terms == other.terms)

    def __repr__(self):
        return (f"FermionOperator(n_modes={self.n_modes}, "
                f"num_terms={self.num_terms}, constant={self.constant})")


def _first_violation(ladder):
    """Index of the first adjacent pair breaking normal order, else None."""
    for k in range(len(ladder) - 1):
        (mi, ri), (mj, rj) = ladder[k], ladder[k + 1]
        if not ri and rj:
            return k
        if ri == rj and mi <= mj:
            return k
    return None
