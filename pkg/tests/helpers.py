"""Shared test utilities."""

from chainplan import planner, sampling


def draw_feasible(n, M, rng, margin=0.8, **plan_kwargs):
    """Rejection-sample a dynamically feasible problem and return it with its
    plan.  Draws whose boundary states cannot live with the position corridor
    are rejected (the planner proves it by exhausting its law search)."""
    while True:
        prob = sampling.random_problem(n, M, rng, margin)
        try:
            return prob, planner.plan(prob, **plan_kwargs)
        except planner.PlanError:
            continue
