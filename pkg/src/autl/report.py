"""Serialisation of reports as JSON, CSV or Markdown.

Output depends only on the reports themselves (no timestamps, no timings),
so identical inputs give byte-identical documents.
"""
from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Optional

from .theorems import RESULT_IDS, CensusSummary, TheoremReport

SCHEMA_VERSION = "autl-report/1"

CSV_COLUMNS = (
    "label", "order", "prime", "nonabelian", "nilpotency_class",
    "order_Z", "order_Gprime", "order_L", "exp_L", "exp_G_mod_Z", "order_G_pn", "order_LG_pn",
    "inv_G_mod_Z", "inv_G_mod_L", "inv_L",
    "aut_order", "inn_order", "autc_order", "autl_order", "autLZ_order",
    "L_cyclic", "Gprime_in_L", "Z_eq_LGpn", "autl_eq_inn", "inn_eq_autLZ",
) + RESULT_IDS + ("error", "table_hash")

CSV_SUMMARY_COLUMNS = ("result_id", "holds", "fails", "not_applicable")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return " ".join(map(str, value))
    return str(value)


def _row(r: TheoremReport) -> list[str]:
    status = {v.result_id: v.status for v in r.verdicts}
    out = []
    for col in CSV_COLUMNS:
        out.append(status.get(col, "") if col in RESULT_IDS else _cell(getattr(r, col)))
    return out


def to_json(reports: list[TheoremReport], summary: Optional[CensusSummary] = None,
            skipped: Iterable = ()) -> str:
    doc = {"schema": SCHEMA_VERSION, "reports": [r.to_dict() for r in reports]}
    if summary is not None:
        doc["summary"] = summary.to_dict()
        doc["skipped"] = [{"source": s.source, "reason": s.reason} for s in skipped]
    return json.dumps(doc, indent=2) + "\n"


def to_csv(reports: list[TheoremReport], summary: Optional[CensusSummary] = None,
           skipped: Iterable = ()) -> str:
    buf = io.StringIO()
    buf.write(f"# {SCHEMA_VERSION} columns: {','.join(CSV_COLUMNS)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(_row(r))
    if summary is not None:
        buf.write(f"\n# summary columns: {','.join(CSV_SUMMARY_COLUMNS)}\n")
        w.writerow(CSV_SUMMARY_COLUMNS)
        for rid, c in summary.counts.items():
            w.writerow([rid, c["holds"], c["fails"], c["not_applicable"]])
        buf.write(f"# autl_eq_inn: {' '.join(summary.autl_eq_inn)}\n")
        for e in summary.errors:
            buf.write(f"# error: {e}\n")
        for s in skipped:
            buf.write(f"# skipped: {s.source}: {s.reason}\n")
    return buf.getvalue()


_MD_MARK = {"holds": "ok", "fails": "FAIL", "not_applicable": "-"}


def to_markdown(reports: list[TheoremReport], summary: Optional[CensusSummary] = None,
                skipped: Iterable = ()) -> str:
    lines = []
    head = ["group", "|G|", "p", "|Z|", "|G'|", "|L|", "|Aut|", "|Inn|", "|Aut_c|", "|Aut_l|", "Aut_l=Inn"]
    head += list(RESULT_IDS)
    lines.append("| " + " | ".join(head) + " |")
    lines.append("|" + "---|" * len(head))
    for r in reports:
        if r.error:
            cells = [r.label, str(r.order)] + [""] * (len(head) - 3) + [f"error: {r.error}"]
            lines.append("| " + " | ".join(cells) + " |")
            continue
        status = {v.result_id: _MD_MARK[v.status] for v in r.verdicts}
        cells = [r.label] + [_cell(x) for x in (r.order, r.prime, r.order_Z, r.order_Gprime, r.order_L,
                                                 r.aut_order, r.inn_order, r.autc_order, r.autl_order,
                                                 r.autl_eq_inn)]
        cells += [status.get(rid, "") for rid in RESULT_IDS]
        lines.append("| " + " | ".join(cells) + " |")
    if summary is not None:
        lines += ["", "## Summary", "", f"Groups: {summary.groups}", ""]
        lines.append("| result | holds | fails | not applicable |")
        lines.append("|---|---|---|---|")
        for rid, c in summary.counts.items():
            lines.append(f"| {rid} | {c['holds']} | {c['fails']} | {c['not_applicable']} |")
        lines += ["", "Groups with Aut_l(G) = Inn(G): " + (", ".join(summary.autl_eq_inn) or "none")]
        for obs in summary.p2_exponent_observations:
            lines.append(f"- p = 2 observation: {obs['group']}: exp(G/Z) = {obs['exp_G_mod_Z']}, exp(L) = {obs['exp_L']}")
        for e in summary.errors:
            lines.append(f"- error: {e}")
        for s in skipped:
            lines.append(f"- skipped: {s.source}: {s.reason}")
    return "\n".join(lines) + "\n"


FORMATTERS = {"json": to_json, "csv": to_csv, "markdown": to_markdown}


def render(fmt: str, reports: list[TheoremReport], summary: Optional[CensusSummary] = None,
           skipped: Iterable = ()) -> str:
    return FORMATTERS[fmt](reports, summary, list(skipped))
