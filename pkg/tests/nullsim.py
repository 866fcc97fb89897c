"""Global-null simulation of the closed combination test under data-dependent selection."""
import numpy as np

from seamless_trials.closed_testing import CombinationSpec, closed_test


def argmax_rule(z, g):
    return int(np.argmax(z))


def argmin_rule(z, g):
    return int(np.argmin(z))


def random_rule(z, g):
    return int(g.integers(z.size))


def null_rejection_counts(J, method, alphas, reps, seed, rule=argmax_rule, n1=50, n2=80):
    """Rejections per alpha when every stage-1 z and the stage-2 p come from the null.

    Dunnett uses z statistics sharing a control (correlation 1/2); Sidak uses
    independent ones.
    """
    g = np.random.default_rng(seed)
    rho = 0.5 if method == "dunnett" else 0.0
    shared = g.standard_normal(reps)
    own = g.standard_normal((reps, J))
    z1 = np.sqrt(rho) * shared[:, None] + np.sqrt(1 - rho) * own
    p2 = g.random(reps)
    specs = [CombinationSpec(n1, n2, a) for a in alphas]
    counts = [0] * len(alphas)
    for r in range(reps):
        sel = rule(z1[r], g)
        for i, spec in enumerate(specs):
            counts[i] += closed_test(sel, J, z1[r], p2[r], method, 0.5, spec).rejected
    return counts
