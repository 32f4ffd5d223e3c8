"""Report emission: canonical report.json plus self-contained static HTML pages.

The HTML embeds all chart geometry inline (SVG) and carries the report data in
a JSON island; no scripts, stylesheets, or network access are required.
"""

from __future__ import annotations

import html
import json
import math
from pathlib import Path
from typing import Sequence

from ..sentiment import CANONICAL_ORDER, ParticipantProfile, SentimentClass, SentimentDistribution
from ..stats import CellStats, Group, SummaryStats, TTestResult, Variant
from .runner import CohortReport, SimilarityAggregate

_CLASS_LABELS = {
    SentimentClass.HAPPINESS: "Happiness",
    SentimentClass.SADNESS: "Sadness",
    SentimentClass.NEUTRAL: "Neutral",
    SentimentClass.ANGER: "Anger",
    SentimentClass.INTENSE_EMOTIONS: "Intense Emotions",
}
_CLASS_COLORS = ("#f2b134", "#4a78b5", "#9aa5b1", "#c0392b", "#8e5ea2")
_SIMILARITY_LABELS = {
    "tweet_real": "Tweets vs real world",
    "image_real": "Images vs real world",
    "image_tweet": "Images vs tweets",
}


class IoFailure(OSError):
    pass


def _profile_to_dict(p: ParticipantProfile) -> dict:
    return {
        "participant_id": p.participant_id,
        "tweet_dist": list(p.tweet_dist.probs),
        "image_dist": list(p.image_dist.probs) if p.image_dist else None,
        "real_world_dist": list(p.real_world_dist.probs),
        "similarity_tweet_real": p.similarity_tweet_real,
        "similarity_image_real": p.similarity_image_real,
        "similarity_image_tweet": p.similarity_image_tweet,
    }


def _profile_from_dict(obj: dict) -> ParticipantProfile:
    image = obj["image_dist"]
    return ParticipantProfile(
        participant_id=obj["participant_id"],
        tweet_dist=SentimentDistribution(tuple(obj["tweet_dist"])),
        image_dist=SentimentDistribution(tuple(image)) if image is not None else None,
        real_world_dist=SentimentDistribution(tuple(obj["real_world_dist"])),
        similarity_tweet_real=obj["similarity_tweet_real"],
        similarity_image_real=obj["similarity_image_real"],
        similarity_image_tweet=obj["similarity_image_tweet"],
    )


def report_to_dict(report: CohortReport) -> dict:
    return {
        "version": report.version,
        "config_echo": report.config_echo,
        "participants": [_profile_to_dict(p) for p in report.participants],
        "summary": report.summary.to_dict(),
        "ttests": [t.to_dict() for t in report.ttests],
        "similarity_stats": {k: v.to_dict() for k, v in report.similarity_stats.items()},
        "excluded": {"image_absent": report.excluded_image_count},
    }


def report_from_dict(obj: dict) -> CohortReport:
    summary_obj = obj["summary"]
    cells = {
        Group(g): {
            SentimentClass(s): CellStats(c["mean"], c["std"]) for s, c in by_s.items()
        }
        for g, by_s in summary_obj["groups"].items()
    }
    summary = SummaryStats(
        n=summary_obj["n"],
        cells=cells,
        group_n={Group(g): n for g, n in summary_obj["group_n"].items()},
    )
    ttests = [
        TTestResult(
            t_statistic=t["t_statistic"],
            df=t["df"],
            p_value=t["p_value"],
            significant=t["significant"],
            variant=Variant(t["variant"]),
            degenerate=t["degenerate"],
            sentiment=SentimentClass(t["sentiment"]) if t["sentiment"] else None,
            group1=t["group1"],
            group2=t["group2"],
        )
        for t in obj["ttests"]
    ]
    return CohortReport(
        participants=[_profile_from_dict(p) for p in obj["participants"]],
        summary=summary,
        ttests=ttests,
        similarity_stats={
            k: SimilarityAggregate(v["mean"], v["std"], v["n"])
            for k, v in obj["similarity_stats"].items()
        },
        excluded_image_count=obj["excluded"]["image_absent"],
        config_echo=obj["config_echo"],
        version=obj["version"],
    )


def report_json_bytes(report: CohortReport) -> bytes:
    text = json.dumps(report_to_dict(report), sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def load_report(path: Path) -> CohortReport:
    return report_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# --- SVG helpers -----------------------------------------------------------

def _donut_svg(dist: SentimentDistribution | None, title: str) -> str:
    if dist is None:
        return (
            '<figure class="chart"><svg viewBox="0 0 120 120" width="160" height="160">'
            '<circle cx="60" cy="60" r="45" fill="none" stroke="#ddd" stroke-width="22"/>'
            '<text x="60" y="64" text-anchor="middle" font-size="9">no image data</text>'
            f'</svg><figcaption>{html.escape(title)}</figcaption></figure>'
        )
    cx, cy, r = 60.0, 60.0, 45.0
    segments = []
    angle = -math.pi / 2
    for cls, color in zip(CANONICAL_ORDER, _CLASS_COLORS):
        fraction = dist[cls]
        if fraction <= 0:
            continue
        span = 2 * math.pi * fraction
        if fraction >= 1.0 - 1e-12:
            segments.append(
                f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" '
                f'stroke="{color}" stroke-width="22"/>'
            )
            break
        x1, y1 = cx + r * math.cos(angle), cy + r * math.sin(angle)
        angle += span
        x2, y2 = cx + r * math.cos(angle), cy + r * math.sin(angle)
        large = 1 if span > math.pi else 0
        segments.append(
            f'<path d="M {x1:.3f} {y1:.3f} A {r} {r} 0 {large} 1 {x2:.3f} {y2:.3f}" '
            f'fill="none" stroke="{color}" stroke-width="22"/>'
        )
    return (
        '<figure class="chart"><svg viewBox="0 0 120 120" width="160" height="160">'
        + "".join(segments)
        + f'</svg><figcaption>{html.escape(title)}</figcaption></figure>'
    )


def _legend_html() -> str:
    items = "".join(
        f'<span class="key"><span class="swatch" style="background:{color}"></span>'
        f"{html.escape(_CLASS_LABELS[cls])}</span>"
        for cls, color in zip(CANONICAL_ORDER, _CLASS_COLORS)
    )
    return f'<div class="legend">{items}</div>'


def _similarity_bar(label: str, value: float | None) -> str:
    if value is None:
        return (
            f'<div class="bar-row"><span class="bar-label">{html.escape(label)}</span>'
            '<div class="bar"><span class="missing">no image data</span></div></div>'
        )
    width = max(0.0, min(100.0, value))
    return (
        f'<div class="bar-row"><span class="bar-label">{html.escape(label)}</span>'
        f'<div class="bar"><div class="fill" style="width:{width:.2f}%"></div></div>'
        f'<span class="bar-value">{value:.2f}</span></div>'
    )


_PAGE_CSS = """
body { font-family: sans-serif; margin: 2rem auto; max-width: 64rem; color: #222; }
h1, h2 { font-weight: 600; }
.charts { display: flex; gap: 1rem; flex-wrap: wrap; }
.chart { margin: 0; text-align: center; font-size: 0.85rem; }
.legend { margin: 0.5rem 0 1.5rem; font-size: 0.85rem; }
.key { margin-right: 1rem; }
.swatch { display: inline-block; width: 0.8em; height: 0.8em; margin-right: 0.3em; }
.bar-row { display: flex; align-items: center; gap: 0.6rem; margin: 0.35rem 0; }
.bar-label { width: 14rem; font-size: 0.9rem; }
.bar { flex: 1; background: #eee; height: 1.1rem; position: relative; }
.fill { background: #4a78b5; height: 100%; }
.bar-value { width: 4rem; text-align: right; font-variant-numeric: tabular-nums; }
.missing { font-size: 0.8rem; color: #888; padding-left: 0.4rem; }
table { border-collapse: collapse; margin: 1rem 0; font-size: 0.9rem; }
td, th { border: 1px solid #ccc; padding: 0.3rem 0.6rem; text-align: right; }
th:first-child, td:first-child { text-align: left; }
"""


def _page(title: str, body: str, data_island: str | None = None) -> str:
    island = (
        f'<script type="application/json" id="report-data">{data_island}</script>'
        if data_island
        else ""
    )
    return (
        "<!DOCTYPE html>\n"
        f'<html lang="en"><head><meta charset="utf-8"><title>{html.escape(title)}</title>'
        f"<style>{_PAGE_CSS}</style></head><body>{body}{island}</body></html>\n"
    )


def _participant_page(profile: ParticipantProfile) -> str:
    charts = (
        _donut_svg(profile.tweet_dist, "Tweets")
        + _donut_svg(profile.image_dist, "Images")
        + _donut_svg(profile.real_world_dist, "Real world")
    )
    bars = (
        _similarity_bar(_SIMILARITY_LABELS["tweet_real"], profile.similarity_tweet_real)
        + _similarity_bar(_SIMILARITY_LABELS["image_real"], profile.similarity_image_real)
        + _similarity_bar(_SIMILARITY_LABELS["image_tweet"], profile.similarity_image_tweet)
    )
    body = (
        f"<h1>Participant {html.escape(profile.participant_id)}</h1>"
        f'<div class="charts">{charts}</div>'
        + _legend_html()
        + "<h2>Similarity scores (0-100)</h2>"
        + bars
    )
    return _page(f"Participant {profile.participant_id}", body)


def _mean_distribution(profiles: Sequence[ParticipantProfile], attr: str) -> SentimentDistribution | None:
    dists = [getattr(p, attr) for p in profiles if getattr(p, attr) is not None]
    if not dists:
        return None
    means = tuple(
        math.fsum(d.probs[i] for d in dists) / len(dists) for i in range(len(CANONICAL_ORDER))
    )
    total = math.fsum(means)
    return SentimentDistribution(tuple(m / total for m in means))


def _cohort_page(report: CohortReport, data_island: str) -> str:
    profiles = report.participants
    charts = (
        _donut_svg(_mean_distribution(profiles, "tweet_dist"), "Tweets (cohort mean)")
        + _donut_svg(_mean_distribution(profiles, "image_dist"), "Images (cohort mean)")
        + _donut_svg(_mean_distribution(profiles, "real_world_dist"), "Real world (cohort mean)")
    )
    sim = report.similarity_stats
    bars = "".join(
        _similarity_bar(
            f"{_SIMILARITY_LABELS[kind]} (mean of {sim[kind].n})",
            sim[kind].mean if sim[kind].n else None,
        )
        for kind in ("tweet_real", "image_real", "image_tweet")
    )
    ttest_rows = "".join(
        f"<tr><td>{html.escape(_CLASS_LABELS[t.sentiment])}</td>"
        f"<td>{html.escape(t.group1)}</td><td>{html.escape(t.group2)}</td>"
        f"<td>{t.t_statistic:.3f}</td><td>{t.p_value:.3g}</td>"
        f"<td>{'yes' if t.significant else 'no'}</td></tr>"
        for t in report.ttests
    )
    participant_links = "".join(
        f'<li><a href="participants/{html.escape(p.participant_id)}.html">'
        f"{html.escape(p.participant_id)}</a></li>"
        for p in profiles
    )
    body = (
        "<h1>Cohort report</h1>"
        f"<p>{len(profiles)} participants; {report.excluded_image_count} without usable image data.</p>"
        f'<div class="charts">{charts}</div>'
        + _legend_html()
        + "<h2>Similarity scores (0-100)</h2>"
        + bars
        + "<h2>Pairwise comparisons</h2>"
        "<table><tr><th>Sentiment</th><th>Group 1</th><th>Group 2</th>"
        "<th>t</th><th>p</th><th>significant</th></tr>"
        + ttest_rows
        + "</table><h2>Participants</h2><ul>"
        + participant_links
        + "</ul>"
    )
    return _page("Cohort report", body, data_island)


def emit_report(report: CohortReport, out_dir: Path) -> list[Path]:
    """Write report.json, the cohort page, and one page per participant."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "participants").mkdir(exist_ok=True)

        written = []
        json_bytes = report_json_bytes(report)
        json_path = out_dir / "report.json"
        json_path.write_bytes(json_bytes)
        written.append(json_path)

        island = json.dumps(report_to_dict(report), sort_keys=True, ensure_ascii=False)
        html_path = out_dir / "report.html"
        html_path.write_text(_cohort_page(report, island), encoding="utf-8")
        written.append(html_path)

        for profile in report.participants:
            page_path = out_dir / "participants" / f"{profile.participant_id}.html"
            page_path.write_text(_participant_page(profile), encoding="utf-8")
            written.append(page_path)
        return written
    except OSError as exc:
        raise IoFailure(f"failed writing report to {out_dir}: {exc}") from exc
