"""Small configurations that keep trainer tests fast."""

from acwi.config import RunConfig

SMALL = dict(env="empty-8x8", num_envs=2, rollout_length=32, minibatch_size=16, icm_batch_size=16, feature_dim=16,
             icm_hidden=16, encoding_size=16, beta_head_hidden=8, hidden_sizes=[16, 16], num_seeds=1,
             total_steps=64 * 5, eval_every=1000, eval_episodes=2, snapshot_every=2, snapshot_samples=16,
             trace_steps=200, log_wallclock=False)


def small_config(**kw):
    return RunConfig(**{**SMALL, **kw})


# acceptance bookkeeping: one line per criterion, echoed in the terminal summary
ACCEPTANCE = {}


class criterion:
    """Context manager that records PASS/FAIL for acceptance criterion ``n``."""

    def __init__(self, n, title):
        self.n, self.title, self.detail = n, title, ""

    def __enter__(self):
        return self

    def __exit__(self, kind, exc, tb):
        ok = kind is None
        detail = self.detail
        if not ok:
            first = str(exc).strip().splitlines()
            detail = f"{detail}; {kind.__name__}: {first[0] if first else ''}".strip("; ")
        line = f"criterion {self.n:2d} {'PASS' if ok else 'FAIL'}  {self.title}" + (f"  [{detail}]" if detail else "")
        ACCEPTANCE[self.n] = line
        print(line)
        return False
