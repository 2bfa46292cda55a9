"""Uniform result records for every check in the library.

A check never raises on mathematical failure; it returns a report with
status 'fail' and a concrete witness (the offending basis element and the
nonzero value found).  'inconclusive-window' means the requested statement
would need data beyond the stored window; it is never silently upgraded
to a pass.  Mathematical preconditions that make a check meaningless
(bad input data, wrong kind of algebra) raise instead.
"""

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive-window"


@dataclass
class Report:
    check: str
    subject: str
    status: str
    window: object = None
    arity_bound: object = None
    witness: object = None
    details: dict = field(default_factory=dict)
    subreports: list = field(default_factory=list)
    elapsed: object = None

    def __post_init__(self):
        if self.status == FAIL and self.witness is None:
            raise ValueError("fail report for %s needs a witness" % self.check)

    @property
    def ok(self):
        return self.status == PASS and all(r.ok for r in self.subreports)

    def worst_status(self):
        order = {PASS: 0, INCONCLUSIVE: 1, FAIL: 2}
        worst = self.status
        for r in self.subreports:
            s = r.worst_status()
            if order[s] > order[worst]:
                worst = s
        return worst

    def to_dict(self, include_timing=False):
        out = {
            "check": self.check,
            "subject": self.subject,
            "status": self.status,
            "window": self.window,
            "arityBound": self.arity_bound,
            "witness": _jsonable(self.witness),
            "details": _jsonable(self.details),
        }
        if self.subreports:
            out["subreports"] = [r.to_dict(include_timing) for r in self.subreports]
        if include_timing:
            # wall time is informational only; machine-readable output drops it
            # so reports stay byte-identical across runs
            out["elapsed"] = self.elapsed
        return out

    def to_json(self, include_timing=False):
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True)

    def lines(self, indent=0):
        pad = "  " * indent
        head = "%s[%s] %s: %s" % (pad, self.status.upper(), self.check, self.subject)
        out = [head]
        for key in sorted(self.details):
            out.append("%s    %s = %s" % (pad, key, _short(self.details[key])))
        if self.witness is not None:
            out.append("%s    witness: %s" % (pad, _short(self.witness)))
        for r in self.subreports:
            out.extend(r.lines(indent + 1))
        return out

    def render(self):
        return "\n".join(self.lines())


def _jsonable(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        raise TypeError("floats are banned from reports")
    try:
        from fractions import Fraction
        if isinstance(x, Fraction):
            return str(x)
    except ImportError:  # pragma: no cover
        pass
    if isinstance(x, dict):
        return {str(_jsonable(k)): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


def _short(x, limit=200):
    s = str(_jsonable(x))
    return s if len(s) <= limit else s[:limit] + "..."
