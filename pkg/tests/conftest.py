import itertools

import numpy as np
import pytest

from minimax_labeling import BOTTOM, TOP, GeneralProblem, PairwiseProblem, ScopeTable


def random_pairwise(rng, n, k, lo=0, hi=5, p_bottom=0.1, p_top=0.05):
    phi = rng.integers(lo, hi + 1, size=(n, n, k, k)).astype(float)
    u = rng.random(size=phi.shape)
    phi[u < p_bottom] = BOTTOM
    phi[(u >= p_bottom) & (u < p_bottom + p_top)] = TOP
    return PairwiseProblem(n, k, phi)


def random_general(rng, n, k, order, count, lo=0, hi=5):
    tables = []
    for _ in range(count):
        scope = tuple(sorted(rng.choice(n, size=order, replace=False).tolist()))
        tables.append(ScopeTable(scope, rng.integers(lo, hi + 1, size=(k,) * order).astype(float)))
    return GeneralProblem(n, k, tuple(tables))


def naive_objective(p, x):
    """Objective straight from the definition, one table entry at a time."""
    if isinstance(p, PairwiseProblem):
        return max(
            (float(p.phi[i, j][x[i], x[j]]) for i, j in itertools.combinations(range(p.num_objects), 2)),
            default=BOTTOM,
        )
    return max((t[tuple(x[i] for i in t.scope)] for t in p.tables), default=BOTTOM)


def naive_dbest_values(p, d):
    vals = sorted(naive_objective(p, x) for x in itertools.product(range(p.num_labels), repeat=p.num_objects))
    return vals[:d]


def is_argmind_set(p, labellings, d):
    """Distinct labellings, d of them (or all), none worse than any labeling left out."""
    every = list(itertools.product(range(p.num_labels), repeat=p.num_objects))
    chosen = [tuple(x) for x in labellings]
    if len(set(chosen)) != len(chosen) or len(chosen) != min(d, len(every)):
        return False
    picked = set(chosen)
    rest = [naive_objective(p, x) for x in every if x not in picked]
    worst = max((naive_objective(p, x) for x in chosen), default=BOTTOM)
    return not rest or worst <= min(rest)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES: list[str] = []


def report(criterion: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
