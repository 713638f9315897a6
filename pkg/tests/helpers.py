"""Shared test utilities: random reduced paths and their re-expansions."""

from mlsgraph.paths import EdgePath


def random_reduced_path(rng, g, max_steps, start=None):
    v = rng.choice(sorted(g.vertex_ids)) if start is None else start
    steps = []
    at = v
    for _ in range(rng.randint(0, max_steps)):
        options = [s for s in g.out_steps(at)
                   if not steps or s != steps[-1].reverse()]
        if not options:
            break
        step = rng.choice(options)
        steps.append(step)
        at = g.step_head(step)
    return EdgePath(g, v, tuple(steps))


def insert_cancelling_pairs(rng, path, count):
    steps = list(path.steps)
    g = path.graph
    for _ in range(count):
        pos = rng.randint(0, len(steps))
        at = path.start
        for s in steps[:pos]:
            at = g.step_head(s)
        out = g.out_steps(at)
        if not out:
            continue
        e = rng.choice(out)
        steps[pos:pos] = [e, e.reverse()]
    return EdgePath(g, path.start, tuple(steps))
