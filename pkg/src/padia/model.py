"""Problem instance and exact two-level reduction of the search Hamiltonian.

The interpolating Hamiltonian H(s) = (1-s)(1 - |Psi><Psi|) + s(1 - |beta><beta|)
acts on N items of which M are marked.  |beta> is the uniform superposition of
the marked items, |alpha> of the unmarked ones, and |Psi> the uniform
superposition of everything.  Every state orthogonal to span{|alpha>, |beta>}
is an eigenstate of H(s) with eigenvalue 1, so the interesting dynamics lives
entirely in that two-dimensional subspace.  This module defines the problem
data and the exact 2x2 restriction everything else consumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "STATE_NORM_TOL",
    "NonEmptyMarkedSetRequired",
    "SearchInstance",
    "EvolutionWindow",
    "ReducedHamiltonian",
    "ReducedState",
    "make_instance",
    "evolution_window",
    "reduced_hamiltonian",
    "initial_state",
]

# |amp_alpha|^2 + |amp_beta|^2 may deviate from 1 by at most this much.
STATE_NORM_TOL = 1e-9


class NonEmptyMarkedSetRequired(ValueError):
    """Raised when an instance with zero marked items is requested."""


@dataclass(frozen=True)
class SearchInstance:
    """A search problem: ``n_items`` items of which ``n_marked`` are marked.

    ``a`` and ``b`` are the squared overlaps of the uniform superposition with
    the unmarked-uniform and marked-uniform states: a = (N-M)/N, b = M/N.
    They are always derived from the exact integers, never stored drifted.
    """

    n_items: int
    n_marked: int
    a: float
    b: float


@dataclass(frozen=True)
class EvolutionWindow:
    """The narrow sweep window [s_minus, s_plus], symmetric about s = 1/2.

    s_minus = 1/2 - 1/(2 sqrt(N)), s_plus = 1/2 + 1/(2 sqrt(N)), and
    omega = s_plus - s_minus = 1/sqrt(N) is the window width.
    """

    s_minus: float
    s_plus: float
    omega: float


@dataclass(frozen=True)
class ReducedHamiltonian:
    """Real symmetric 2x2 restriction of H(s) in the ordered basis (|alpha>, |beta>).

    Satisfies h_aa + h_bb = 1 and h_aa*h_bb - h_ab**2 = s(1-s)*a for every
    valid instance; both identities are enforced by tests, not at runtime.
    """

    h_aa: float
    h_ab: float
    h_bb: float
    s: float


@dataclass(frozen=True)
class ReducedState:
    """State in the invariant subspace: complex amplitudes on |alpha> and |beta>."""

    amp_alpha: complex
    amp_beta: complex

    def norm(self) -> float:
        return math.sqrt(abs(self.amp_alpha) ** 2 + abs(self.amp_beta) ** 2)


def make_instance(n_items: int, n_marked: int) -> SearchInstance:
    """Validate (N, M) and derive the squared overlaps a = (N-M)/N, b = M/N.

    The marked set must be nonempty (1 <= M <= N) and there must be at least
    two items.  Integers up to 2**63 - 1 are handled exactly; a and b are the
    correctly rounded ratios.
    """
    if n_marked == 0:
        raise NonEmptyMarkedSetRequired("the marked set must not be empty (need M >= 1)")
    if n_items < 2:
        raise ValueError(f"need at least 2 items, got N={n_items}")
    if not 1 <= n_marked <= n_items:
        raise ValueError(f"need 1 <= M <= N, got M={n_marked}, N={n_items}")
    return SearchInstance(
        n_items=n_items,
        n_marked=n_marked,
        a=(n_items - n_marked) / n_items,
        b=n_marked / n_items,
    )


def evolution_window(instance: SearchInstance) -> EvolutionWindow:
    """Sweep window for the instance; omega = 1/sqrt(N)."""
    half_width = 0.5 / math.sqrt(instance.n_items)
    s_minus = 0.5 - half_width
    s_plus = 0.5 + half_width
    return EvolutionWindow(s_minus=s_minus, s_plus=s_plus, omega=s_plus - s_minus)


def reduced_hamiltonian(instance: SearchInstance, s: float) -> ReducedHamiltonian:
    """Project H(s) onto span{|alpha>, |beta>}.

    Entries: h_aa = 1 - (1-s)a, h_ab = -(1-s)sqrt(ab), h_bb = (1-s)a.
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    one_minus_s = 1.0 - s
    h_bb = one_minus_s * instance.a  # equals 1 - (1-s)b - s
    return ReducedHamiltonian(
        h_aa=1.0 - h_bb,
        h_ab=-one_minus_s * math.sqrt(instance.a * instance.b),
        h_bb=h_bb,
        s=s,
    )


def initial_state(instance: SearchInstance) -> ReducedState:
    """The uniform superposition, written in the (|alpha>, |beta>) basis."""
    return ReducedState(
        amp_alpha=complex(math.sqrt(instance.a)),
        amp_beta=complex(math.sqrt(instance.b)),
    )
