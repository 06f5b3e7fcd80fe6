"""Enumeration policy and generic identity sweeps.

Every verification family in the package runs through :func:`sweep`:
exhaustive when the tuple space is small, seeded random sampling above the
cap.  Reports carry the mode so coverage stays auditable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Policy:
    """Knobs for all verification sweeps (deterministic given the seed)."""

    seed: int = 0
    tuple_cap: int = 1 << 15
    samples: int = 10_000
    carrier_cap: int = 4096
    sigma_count: int = 50

    def rng(self, label: str) -> random.Random:
        return random.Random((self.seed, label).__repr__())


DEFAULT_POLICY = Policy()


@dataclass
class CheckResult:
    label: str
    ok: bool
    mode: str = "exhaustive"
    count: int = 0
    witness: object = None

    def as_dict(self):
        return {
            "label": self.label,
            "ok": self.ok,
            "mode": self.mode,
            "count": self.count,
            "witness": repr(self.witness) if self.witness is not None else None,
        }


class VerificationError(AssertionError):
    """A machine-checked identity failed; carries the replayable witness."""

    def __init__(self, result: CheckResult):
        super().__init__("%s failed (witness=%r)" % (result.label, result.witness))
        self.result = result


def sweep(label, domains, check, policy: Policy = DEFAULT_POLICY) -> CheckResult:
    """Run ``check(*args)`` over the product of ``domains``.

    ``check`` returns None on success or a witness object on failure.
    Domains are realized lists.  Exhaustive iff the tuple count is within
    ``policy.tuple_cap``, else ``policy.samples`` seeded samples.
    """
    domains = [list(d) for d in domains]
    total = 1
    for d in domains:
        total *= len(d)
        if total == 0:
            return CheckResult(label, True, "exhaustive", 0)
    if total <= policy.tuple_cap:
        count = 0
        for args in _product(domains):
            count += 1
            w = check(*args)
            if w is not None:
                return CheckResult(label, False, "exhaustive", count, w)
        return CheckResult(label, True, "exhaustive", count)
    rng = policy.rng(label)
    for count in range(1, policy.samples + 1):
        args = [d[rng.randrange(len(d))] for d in domains]
        w = check(*args)
        if w is not None:
            return CheckResult(label, False, "sampled", count, w)
    return CheckResult(label, True, "sampled", policy.samples)


def _product(domains):
    import itertools

    return itertools.product(*domains)


@dataclass
class CheckSuite:
    """Accumulates CheckResults; raises eagerly unless collecting."""

    name: str = ""
    collect: bool = False
    results: list = field(default_factory=list)

    def run(self, label, domains, check, policy: Policy = DEFAULT_POLICY):
        res = sweep(label, domains, check, policy)
        self.record(res)
        return res

    def record(self, res: CheckResult):
        self.results.append(res)
        if not res.ok and not self.collect:
            raise VerificationError(res)
        return res

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self):
        return [r for r in self.results if not r.ok]
