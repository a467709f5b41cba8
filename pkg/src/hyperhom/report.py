"""JSON and text rendering of command results.

Reports are deterministic: keys are sorted, infinite values are the string
"inf" and wall-clock timings are only included on request.
"""

from __future__ import annotations

import dataclasses
import json
import math

from . import __version__
from .homology import LengthValue
from .kernel.hilbert import HilbertSeries
from .kernel.polynomial import Polynomial
from .theta import HOLDS, NOT_APPLICABLE, VIOLATED

TOOL = "hyperhom"


def to_jsonable(obj):
    if isinstance(obj, LengthValue):
        return obj.to_json()
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf"
        return obj
    if isinstance(obj, Polynomial):
        return str(obj)
    if isinstance(obj, HilbertSeries):
        return {"numerator": [[e, c] for e, c in obj.numerator], "nvars": obj.nvars}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return str(obj)


def combine_verdicts(verdicts) -> str:
    verdicts = list(verdicts)
    if VIOLATED in verdicts:
        return VIOLATED
    if verdicts and all(v == NOT_APPLICABLE for v in verdicts):
        return NOT_APPLICABLE
    return HOLDS


def build_report(command: list[str], digest: str, seed: int, results: list[dict], timings=None) -> dict:
    report = {
        "tool": TOOL,
        "version": __version__,
        "command": command,
        "config_digest": digest,
        "seed": seed,
        "results": to_jsonable(results),
        "verdict": combine_verdicts(r.get("verdict", HOLDS) for r in results),
    }
    if timings is not None:
        report["timings"] = timings
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_text(report: dict) -> str:
    lines = []
    for r in report["results"]:
        title = r.get("title") or r.get("operation") or r.get("check") or "result"
        verdict = r.get("verdict")
        lines.append(f"{title}: {verdict}" if verdict else f"{title}")
        for text in r.get("text", []):
            lines.append("  " + text)
    lines.append(f"verdict: {report['verdict']}")
    return "\n".join(lines) + "\n"
