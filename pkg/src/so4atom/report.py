"""Result serialization: JSON, a markdown mirror, CSV for spectrum tables.

Output is byte-stable for a fixed seed and configuration except for the
elapsed_ms fields, which is what the determinism test strips before
comparing runs.
"""

import io
import json

from . import __version__
from .errors import UsageError

__all__ = [
    "check_entry",
    "residual_entry",
    "build_payload",
    "render",
    "render_json",
    "render_markdown",
    "spectrum_csv",
    "strip_elapsed",
    "emit",
]

_WITNESS_LIMIT = 400


def check_entry(result, residual=None):
    """One row of the checks array from a catalog result."""
    entry = {"id": result.check_id, "status": result.status}
    if residual is not None:
        entry["residual"] = residual.max_rel_residual
    if result.witness:
        text = result.witness
        if len(text) > _WITNESS_LIMIT:
            text = text[:_WITNESS_LIMIT] + "... (%d terms)" % result.residual_terms
        entry["witness_text"] = text
    entry["elapsed_ms"] = round(result.elapsed_ms, 3)
    return entry


def residual_entry(report, tol):
    status = "pass" if report.max_rel_residual < tol else "fail"
    return {"id": report.check_id, "status": status,
            "residual": report.max_rel_residual, "elapsed_ms": 0.0}


def build_payload(command, config, entries):
    passed = sum(1 for e in entries if e["status"] in
                 ("pass", "pass_at_mu_0_and_1", "pass_at_mu_0", "pass_at_mu_1"))
    failed = sum(1 for e in entries if e["status"] == "fail")
    return {
        "tool_version": __version__,
        "command": command,
        "config": dict(config),
        "checks": list(entries),
        "summary": {"pass": passed, "fail": failed},
    }


def render_json(payload):
    return json.dumps(payload, indent=2) + "\n"


def render_markdown(payload):
    out = io.StringIO()
    out.write("# %s report\n\n" % payload["command"])
    out.write("tool_version: %s\n\n" % payload["tool_version"])
    if payload["config"]:
        out.write("## config\n\n")
        for key in payload["config"]:
            out.write("- %s: %s\n" % (key, payload["config"][key]))
        out.write("\n")
    out.write("## checks\n\n")
    out.write("| id | status | residual | witness |\n")
    out.write("|---|---|---|---|\n")
    for e in payload["checks"]:
        residual = "%.3e" % e["residual"] if "residual" in e else ""
        witness = e.get("witness_text", "").replace("|", "\\|")
        out.write("| %s | %s | %s | %s |\n" % (e["id"], e["status"], residual, witness))
    s = payload["summary"]
    out.write("\n**%d pass, %d fail**\n" % (s["pass"], s["fail"]))
    return out.getvalue()


def spectrum_csv(rows):
    out = io.StringIO()
    out.write("sector_j,channel,level_index,E_computed,E_predicted,"
              "n_label,branch,rel_error\n")
    for r in rows:
        out.write("%s,%s,%d,%.12g,%.12g,%s,%s,%.6e\n" % (
            r.sector_j, r.channel, r.level_index, r.e_computed,
            r.e_predicted, r.n_label, r.branch, r.rel_error))
    return out.getvalue()


def strip_elapsed(payload_text):
    """JSON text with timing removed, for byte-stability comparisons."""
    data = json.loads(payload_text)
    for entry in data.get("checks", ()):
        entry.pop("elapsed_ms", None)
    return json.dumps(data, indent=2) + "\n"


def emit(text, out_path=None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")


def render(payload, fmt):
    if fmt == "json":
        return render_json(payload)
    if fmt == "md":
        return render_markdown(payload)
    raise UsageError("csv output is reserved for spectrum tables")
