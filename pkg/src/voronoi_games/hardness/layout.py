"""Point layout of the reduction, in units where the clause spacing d is 1.

The circle is cut into k variable regions followed by l gadget regions, all
of the same length L = (T + 1) d where T is the largest number of clauses
sharing a variable. A boundary player sits at the start of every region.

Variable region of a variable in t clauses (offsets from its boundary):

    W_L = C_1 - 5ε   c'' = C_r - 4ε   c' = C_r - 2ε   C_r = L - (t - r + 1) d
    W_R = L - 4ε

The wrap player prefers W_L (5ε) over W_R (4ε) unless a shadow of the first
slot is chosen. A variable in no clause gets wrap points L/2 and L - 4ε.

Utility enforcement gadget for player r (offsets from the gadget's own
boundary b1 at ``o`` = L - d - 7ε before the first point; the next boundary
is b2):

    x: o + ε, o + 3ε     y: o + 2ε, o + 6ε     z: o + 5ε     r: o + 8ε

r's extra point is d - ε before b2. With r elsewhere, (x: o + ε, y: o + 6ε)
is the only stable pair; with r on it, x and y chase each other forever.
"""

from dataclasses import dataclass
from fractions import Fraction

from voronoi_games.errors import PreconditionError

# Exclusive upper bound on ε (in units of d) for every strict inequality above
EPSILON_LIMIT = Fraction(1, 8)

UEG_X = (1, 3)
UEG_Y = (2, 6)
UEG_Z = 5
UEG_R = 8
UEG_SPAN = 7


def check_epsilon(d: Fraction, eps: Fraction) -> None:
    if not 0 < eps < EPSILON_LIMIT * d:
        raise PreconditionError(f"eps={eps} must lie strictly between 0 and {EPSILON_LIMIT * d}")


@dataclass(frozen=True)
class VariableRegion:
    start: Fraction
    length: Fraction
    d: Fraction
    eps: Fraction
    slots: int

    def clause_point(self, r: int) -> Fraction:
        """Position of the r-th (1-based) clause slot."""
        return self.start + self.length - (self.slots - r + 1) * self.d

    def shadow_points(self, r: int) -> tuple[Fraction, Fraction]:
        """(c', c'') positions for slot r: 2ε and 4ε before the clause point."""
        c = self.clause_point(r)
        return c - 2 * self.eps, c - 4 * self.eps

    def wrap_points(self) -> tuple[Fraction, Fraction]:
        right = self.start + self.length - 4 * self.eps
        if self.slots == 0:
            return self.start + self.length / 2, right
        return self.clause_point(1) - 5 * self.eps, right

    def contains(self, position: Fraction) -> bool:
        return self.start <= position < self.start + self.length


@dataclass(frozen=True)
class GadgetRegion:
    start: Fraction
    length: Fraction
    d: Fraction
    eps: Fraction

    @property
    def origin(self) -> Fraction:
        return self.start + self.length - self.d - UEG_SPAN * self.eps

    def offset(self, units: int) -> Fraction:
        return self.origin + units * self.eps

    @property
    def x_points(self) -> tuple[Fraction, Fraction]:
        return tuple(self.offset(u) for u in UEG_X)

    @property
    def y_points(self) -> tuple[Fraction, Fraction]:
        return tuple(self.offset(u) for u in UEG_Y)

    @property
    def z_point(self) -> Fraction:
        return self.offset(UEG_Z)

    @property
    def r_point(self) -> Fraction:
        return self.offset(UEG_R)


def region_length(max_occurrences: int, d: Fraction = Fraction(1)) -> Fraction:
    return (max_occurrences + 1) * d
