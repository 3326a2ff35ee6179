"""Embedded example series, usable offline as ``corpus:<name>``."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Optional

from .errors import SchemaError
from .formats import load_series_text
from .series import SeriesHandle

I = "(0)+(1)*sqrt(-1)"
MINUS_I = "(0)+(-1)*sqrt(-1)"


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    definition: dict
    description: str
    expected_class: Optional[str] = None
    expected_branch: Optional[str] = None   # "i", "ii" or "iii"

    def text(self) -> str:
        return json.dumps(self.definition, indent=2) + "\n"

    def series(self) -> SeriesHandle:
        return load_series_text(self.text(), f"corpus:{self.name}")


def _op(name, A, initial, **field):
    return {"name": name, "field": field or {"type": "Q"}, "operator": {"A": A},
            "initial": initial}


def _rec(name, B, initial, offset=0, **field):
    return {"name": name, "field": field or {"type": "Q"},
            "recurrence": {"B": B, "offset": offset}, "initial": initial}


def _logm(m: int) -> dict:
    # n (n+m) a_{n+m} + n^2 a_n = 0
    B = [["0", "0", "1"]] + [[] for _ in range(m - 1)] + [["0", str(m), "1"]]
    return _rec(f"logm{m}", B, ["0"] * m + ["1"])


_ENTRIES = [
    CorpusEntry("log1p", _op("log1p", [["1", "1"], ["1"], []], ["0", "1"]),
                "log(1+z)", "LogN", "ii"),
    CorpusEntry("logm2", _logm(2), "log(1+z^2)", "LogN", "ii"),
    CorpusEntry("logm3", _logm(3), "log(1+z^3)", "LogN", "ii"),
    CorpusEntry("exp", _op("exp", [["1"], ["-1"]], ["1"]), "exp(z)", "NLogN", "i"),
    CorpusEntry("geometric2", _op("geometric2", [["1", "-2"], ["-2"]], ["1"]),
                "1/(1-2z)", "Linear", "i"),
    CorpusEntry("halfgeom", _op("halfgeom", [["1", "-1/2"], ["-1/2"]], ["1"]),
                "1/(1-z/2)", "Linear", "i"),
    CorpusEntry("invgeom", _op("invgeom", [["1", "-1"], ["-1"]], ["1"]),
                "1/(1-z)", "Constant", "iii"),
    CorpusEntry("nzn", _rec("nzn", [["-1", "-1"], ["0", "1"]], ["0", "1"]),
                "z/(1-z)^2", "LogN", "iii"),
    CorpusEntry("altperiodic", _rec("altperiodic", [["1"], [], ["1"]], ["1", "0"]),
                "1/(1+z^2)", "Constant", "iii"),
    CorpusEntry("catalanish", _op("catalanish", [["1", "-4"], ["-2"]], ["1"]),
                "(1-4z)^(-1/2)", "Linear", "i"),
    CorpusEntry("hilbertish", _rec("hilbertish", [["1", "1"], ["-2", "-1"]], ["1"]),
                "sum z^n/(n+1)", "LogN", "ii"),
    CorpusEntry("gauss_i", _rec("gauss_i", [["0", "0", MINUS_I], ["0", "1", "1"]], ["0", I],
                                type="quadratic", d=-1),
                "sum i^n z^n/n over Q(i)", "LogN", "ii"),
    CorpusEntry("halflog", _op("halflog", [["2", "-1"], ["-1"], []], ["0", "1/2"]),
                "-log(1-z/2)", "Linear", "i"),
    CorpusEntry("nfact", _rec("nfact", [["1", "1"], ["-1"]], ["1"]),
                "sum n! z^n (divergent)", "NLogN", "i"),
]

CORPUS: Dict[str, CorpusEntry] = {e.name: e for e in _ENTRIES}
assert len(CORPUS) == len(_ENTRIES)


def get_entry(name: str) -> CorpusEntry:
    try:
        return CORPUS[name]
    except KeyError:
        raise SchemaError(f"unknown corpus entry {name!r}; known: {', '.join(CORPUS)}") from None


def get_series(name: str) -> SeriesHandle:
    return get_entry(name).series()
