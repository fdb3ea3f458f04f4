"""Monotone 1-in-3 SAT formulas: parsing, formatting and brute-force solving."""

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from voronoi_games.errors import InvalidInstanceError, ParseError, PreconditionError

MAX_BRUTE_FORCE_VARIABLES = 24
_CHUNK = 1 << 18
_HEADER = re.compile(r"p\s+1in3\s+(\d+)\s+(\d+)\s*$")


@dataclass(frozen=True)
class Monotone1in3Formula:
    """k variables numbered 1..k and clauses of three distinct variables each."""

    k: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.k < 0:
            raise InvalidInstanceError(f"variable count must be nonnegative, got {self.k}")
        clauses = []
        for j, clause in enumerate(self.clauses, start=1):
            clause = tuple(int(v) for v in clause)
            if len(clause) != 3 or len(set(clause)) != 3:
                raise InvalidInstanceError(f"clause {j} must hold three distinct variables, got {clause}")
            if not all(1 <= v <= self.k for v in clause):
                raise InvalidInstanceError(f"clause {j} references a variable outside 1..{self.k}: {clause}")
            clauses.append(tuple(sorted(clause)))
        object.__setattr__(self, "clauses", tuple(clauses))

    @property
    def l(self) -> int:
        return len(self.clauses)

    def occurrences(self, variable: int) -> list[int]:
        """0-based indices of the clauses containing ``variable``, ascending."""
        return [j for j, clause in enumerate(self.clauses) if variable in clause]

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        if len(assignment) != self.k:
            return False
        return all(sum(bool(assignment[v - 1]) for v in clause) == 1 for clause in self.clauses)


@dataclass(frozen=True)
class SatWitness:
    assignment: tuple[bool, ...]
    valid: bool = True

    @property
    def true_variables(self) -> list[int]:
        return [v for v, value in enumerate(self.assignment, start=1) if value]


def parse_formula(text: str) -> Monotone1in3Formula:
    """Parse the clause-per-line text format.

    Blank lines and ``c`` comment lines are skipped. An optional
    ``p 1in3 <k> <l>`` header fixes the variable count; without it k is the
    largest variable mentioned.
    """
    declared = None
    header_line = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            match = _HEADER.match(line)
            if match is None:
                raise ParseError("header must read 'p 1in3 <k> <l>'", lineno, raw.index("p") + 1)
            if declared is not None or clauses:
                raise ParseError("header must come before every clause", lineno, raw.index("p") + 1)
            declared = (int(match.group(1)), int(match.group(2)))
            header_line = lineno
            continue
        values = []
        for token in re.finditer(r"\S+", raw):
            if not token.group().isdigit() or int(token.group()) < 1:
                raise ParseError(f"expected a positive variable index, got {token.group()!r}", lineno, token.start() + 1)
            values.append(int(token.group()))
        if len(values) != 3:
            raise ParseError(f"a clause has exactly three variables, got {len(values)}", lineno, 1)
        if len(set(values)) != 3:
            raise ParseError(f"clause variables must be distinct, got {values}", lineno, 1)
        if declared is not None and max(values) > declared[0]:
            raise ParseError(f"variable {max(values)} exceeds the declared k={declared[0]}", lineno, 1)
        clauses.append(tuple(values))

    if declared is not None:
        k, l = declared
        if l != len(clauses):
            raise ParseError(f"header declares {l} clauses, found {len(clauses)}", header_line, 1)
    else:
        k = max((max(c) for c in clauses), default=0)
    return Monotone1in3Formula(k, tuple(clauses))


def format_formula(formula: Monotone1in3Formula) -> str:
    lines = [f"p 1in3 {formula.k} {formula.l}"]
    lines.extend(" ".join(str(v) for v in clause) for clause in formula.clauses)
    return "\n".join(lines) + "\n"


def load_formula(path: Path) -> Monotone1in3Formula:
    return parse_formula(Path(path).read_text(encoding="utf-8"))


def dump_formula(formula: Monotone1in3Formula, path: Path) -> None:
    Path(path).write_text(format_formula(formula), encoding="utf-8")


def solve_1in3(formula: Monotone1in3Formula) -> list[SatWitness]:
    """Every satisfying assignment, in increasing binary order (variable 1 lowest bit)."""
    k = formula.k
    if k > MAX_BRUTE_FORCE_VARIABLES:
        raise PreconditionError(f"brute force supports at most {MAX_BRUTE_FORCE_VARIABLES} variables, got {k}")
    clause_idx = np.asarray(formula.clauses, dtype=np.int64).reshape(-1, 3) - 1
    shifts = np.arange(k, dtype=np.int64)
    witnesses = []
    total = 1 << k
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        bits = ((codes[:, None] >> shifts[None, :]) & 1).astype(np.int8)
        ok = np.ones(len(codes), dtype=bool)
        for clause in clause_idx:
            ok &= bits[:, clause].sum(axis=1) == 1
        for row in bits[ok]:
            witnesses.append(SatWitness(tuple(bool(b) for b in row)))
    return witnesses


def small_formulas(max_variables: int, max_clauses: int) -> Iterator[Monotone1in3Formula]:
    """Every formula with 1..max_variables variables and 0..max_clauses clauses.

    Clauses are drawn as a multiset, so repeated clauses are included.
    """
    for k in range(1, max_variables + 1):
        pool = list(itertools.combinations(range(1, k + 1), 3))
        for l in range(max_clauses + 1):
            for clauses in itertools.combinations_with_replacement(pool, l):
                yield Monotone1in3Formula(k, clauses)
