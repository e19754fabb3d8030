"""Topological bookkeeping for complex-point indices.

The index sum over a closed real surface in a complex surface equals
chi(T) + chi(N), the Euler numbers of tangent and normal bundle.  A
cross-cap connect sum lowers chi(T) by one and raises chi(N) by two while
deleting one hyperbolic point of index -1, so every blow-up raises the
index sum by one.  Umbilic indices are half the complex indices; all
arithmetic here is exact on integers (umbilic values stored doubled).
"""

from dataclasses import dataclass, replace

from .errors import NotHyperbolic


@dataclass(frozen=True)
class TopLedger:
    """Euler numbers plus the inventory of complex points (label, index)."""

    chi_t: int
    chi_n: int
    inventory: tuple

    def __post_init__(self):
        object.__setattr__(self, "inventory", tuple((str(l), int(i)) for l, i in self.inventory))

    def index_sum(self):
        return sum(i for _, i in self.inventory)


def lai_sum(l):
    """(chi_t + chi_n, inventory-consistency flag)."""
    total = l.chi_t + l.chi_n
    return total, l.index_sum() == total


def connect_sum_rp2(l, k, removed):
    """Blow up k hyperbolic points: chi_t -= k, chi_n += 2k, drop the points.

    Every removed label must exist with index exactly -1.
    """
    removed = list(removed)
    if len(removed) != k:
        raise ValueError(f"k={k} but {len(removed)} labels supplied")
    inv = dict(l.inventory)
    if len(inv) != len(l.inventory):
        raise ValueError("inventory labels must be unique to remove by label")
    for label in removed:
        if label not in inv:
            raise ValueError(f"no complex point labelled {label!r}")
        if inv[label] != -1:
            raise NotHyperbolic(f"point {label!r} has index {inv[label]}, not -1")
    keep = tuple(item for item in l.inventory if item[0] not in set(removed))
    return replace(l, chi_t=l.chi_t - k, chi_n=l.chi_n + 2 * k, inventory=keep)


@dataclass(frozen=True)
class ScenarioReport:
    """The full arithmetic chain from an umbilic of index 2 + k/2 down to a
    single complex point surviving k blow-ups."""

    k: int
    umbilic_index_doubled: int      # 2i = 4 + k
    complex_index: int              # I = 2i
    annulus_index_sum: int          # -k
    hyperbolic_points_after_cancellation: int
    final_chi_t: int
    final_chi_n: int
    final_index_sum: int
    identities_hold: bool


def reformulation_scenario(k):
    """Exact integer arithmetic for the closed-up surface with one umbilic of
    index 2 + k/2 plus an annulus of generic umbilics summing to -k/2."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    doubled = 4 + k              # 2 * (2 + k/2)
    complex_index = doubled      # I = 2 i(p)
    annulus_sum = -k             # complex indices in the annulus
    # sphere section: chi_t = chi_n = 2, so the index sum starts at 4
    start = TopLedger(
        chi_t=2,
        chi_n=2,
        inventory=((("p", complex_index),) + tuple((f"h{j}", -1) for j in range(k))),
    )
    _, start_ok = lai_sum(start)
    final = connect_sum_rp2(start, k, [f"h{j}" for j in range(k)])
    final_total, final_ok = lai_sum(final)
    identities = (
        start_ok
        and final_ok
        and complex_index + annulus_sum == 4
        and final_total == 4 + k
        and final.index_sum() == complex_index
    )
    return ScenarioReport(
        k=k,
        umbilic_index_doubled=doubled,
        complex_index=complex_index,
        annulus_index_sum=annulus_sum,
        hyperbolic_points_after_cancellation=k,
        final_chi_t=final.chi_t,
        final_chi_n=final.chi_n,
        final_index_sum=final.index_sum(),
        identities_hold=identities,
    )
