"""Cross-modal report: hot segments, static peaks, tones, colocation."""

import json
from dataclasses import dataclass, field

import numpy as np

from ..core.series import PositionSeries, Series, Waterfall
from ..errors import ValidationError

#: A position block is "dynamically hot" above this peak std (nanostrain).
HOT_THRESHOLD_NE = 1.0
#: A static feature must exceed this |delta eps| (microstrain).
PEAK_THRESHOLD_UE = 20.0


@dataclass
class CrossModalReport:
    present: dict
    wind: "dict | None"
    wind_das_correlation: "float | None"
    das_hot_segments: list
    delta_eps_peaks: list
    tones: dict
    sop: "dict | None"
    colocation: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        r = self.wind_das_correlation
        if r is not None and not -1.0 <= r <= 1.0:
            raise ValidationError(f"correlation {r} outside [-1, 1]")

    def to_dict(self):
        return {
            "schema": "report1",
            "present": self.present,
            "wind": self.wind,
            "wind_das_correlation": self.wind_das_correlation,
            "das_hot_segments": self.das_hot_segments,
            "delta_eps_peaks": self.delta_eps_peaks,
            "tones": self.tones,
            "sop": self.sop,
            "colocation": self.colocation,
            "notes": self.notes,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self):
        lines = ["cross-modal report", "=================="]
        if self.wind:
            lines.append(f"wind peak: {self.wind['peak_mps']:.1f} m/s at {self.wind['peak_time']}")
        if self.present.get("das"):
            lines.append(f"DAS hot segments (>= {HOT_THRESHOLD_NE} ne):")
            for seg in self.das_hot_segments:
                lines.append(
                    f"  {seg['start_m'] / 1000:.2f}-{seg['end_m'] / 1000:.2f} km, "
                    f"peak {seg['peak_ne']:.2f} ne"
                )
            if self.wind_das_correlation is not None:
                lines.append(f"wind/DAS correlation: {self.wind_das_correlation:.3f}")
        else:
            lines.append("DAS: absent")
        if self.present.get("botdr"):
            lines.append("BOTDR static strain peaks:")
            for pk in self.delta_eps_peaks:
                lines.append(
                    f"  {pk['position_m'] / 1000:.2f} km: {pk['delta_ue']:.0f} ue"
                )
        else:
            lines.append("BOTDR: absent")
        if self.present.get("sop") and self.sop:
            ratio = self.sop.get("storm_prestorm_ratio")
            lines.append(
                "SOP storm/pre-storm fluctuation ratio: "
                + (f"{ratio:.1f}" if ratio is not None else "n/a")
            )
        else:
            lines.append("SOP: absent")
        for mod, windows in sorted(self.tones.items()):
            for win_name, dets in sorted(windows.items()):
                for d in dets:
                    pos = "" if d.get("position_m") is None else f" at {d['position_m'] / 1000:.1f} km"
                    lines.append(
                        f"tone [{mod}/{win_name}]: {d['freq_hz']:.2f} Hz "
                        f"({d['prominence_db']:.0f} dB){pos}"
                    )
        for c in self.colocation:
            lines.append(
                f"colocation at {c['position_m'] / 1000:.2f} km: "
                + ("static+dynamic agree" if c["colocated"] else "dynamic only"
                   if c["das_hot"] else "static only")
            )
        lines.extend(self.notes)
        return "\n".join(lines) + "\n"


def hot_segments(das_std: Waterfall, threshold_ne=HOT_THRESHOLD_NE):
    """Contiguous position ranges whose peak block std exceeds threshold."""
    peak = np.asarray(das_std.values).max(axis=0)
    coords = das_std.axis.coords()
    half = das_std.axis.spacing_m / 2.0
    hot = peak >= threshold_ne
    segs = []
    i = 0
    while i < len(hot):
        if hot[i]:
            j = i
            while j + 1 < len(hot) and hot[j + 1]:
                j += 1
            segs.append({
                "start_m": float(coords[i] - half),
                "end_m": float(coords[j] + half),
                "peak_ne": float(peak[i : j + 1].max()),
            })
            i = j + 1
        else:
            i += 1
    return segs


def delta_eps_peaks(delta: PositionSeries, threshold_ue=PEAK_THRESHOLD_UE,
                    min_separation_m=None):
    """Local maxima of |delta eps| above threshold (NaN gaps break runs).

    Peaks closer than ``min_separation_m`` (default: one grid step) are
    clustered, keeping the strongest; pass the instrument resolution so
    noise on a plateau does not fragment into many detections.
    """
    v = np.abs(np.asarray(delta.values, dtype=np.float64))
    v = np.where(np.isfinite(v), v, -np.inf)
    sep = min_separation_m if min_separation_m else delta.position.spacing_m
    peaks = []
    for i in range(len(v)):
        if v[i] < threshold_ue or not np.isfinite(v[i]):
            continue
        left = v[i - 1] if i > 0 else -np.inf
        right = v[i + 1] if i < len(v) - 1 else -np.inf
        if v[i] >= left and v[i] > right:
            peaks.append({
                "position_m": float(delta.position.index_to_coord(i)),
                "delta_ue": float(delta.values[i]),
            })
    peaks.sort(key=lambda p: -abs(p["delta_ue"]))
    kept = []
    for p in peaks:
        if all(abs(p["position_m"] - q["position_m"]) > sep for q in kept):
            kept.append(p)
    kept.sort(key=lambda p: p["position_m"])
    return kept


def build_report(wind: "Series | None" = None,
                 das_std: "Waterfall | None" = None,
                 delta_eps: "PositionSeries | None" = None,
                 resolution_m: "float | None" = None,
                 das_tones: "dict | None" = None,
                 sop_tones: "dict | None" = None,
                 sop_summary: "dict | None" = None,
                 correlation: "float | None" = None,
                 hot_threshold_ne=HOT_THRESHOLD_NE,
                 peak_threshold_ue=PEAK_THRESHOLD_UE,
                 notes=()) -> CrossModalReport:
    """Assemble the cross-modal report from whichever products exist.

    At least one modality must be present. Colocation compares every static
    strain peak and every dynamically hot DAS segment within one BOTDR
    resolution cell (the natural common spatial unit).
    """
    present = {"das": das_std is not None, "botdr": delta_eps is not None,
               "sop": sop_summary is not None}
    if not any(present.values()):
        raise ValidationError("report needs at least one processed modality")

    wind_info = None
    if wind is not None:
        i = int(np.argmax(wind.values))
        from ..core.grids import format_utc

        wind_info = {"peak_mps": float(wind.values[i]),
                     "peak_time": format_utc(wind.time.index_to_time(i))}

    segs = hot_segments(das_std, hot_threshold_ne) if das_std is not None else []
    peaks = (delta_eps_peaks(delta_eps, peak_threshold_ue, min_separation_m=resolution_m)
             if delta_eps is not None else [])

    colocation = []
    if das_std is not None and delta_eps is not None:
        lo_d, hi_d = das_std.axis.coords()[0], das_std.axis.coords()[-1]
        lo_b, hi_b = delta_eps.position.coords()[0], delta_eps.position.coords()[-1]
        if hi_d < lo_b or hi_b < lo_d:
            raise ValidationError("DAS and BOTDR position grids do not overlap")
        tol = resolution_m if resolution_m else delta_eps.position.spacing_m
        for pk in peaks:
            x = pk["position_m"]
            if not lo_d <= x <= hi_d:
                continue  # outside the DAS window; nothing to compare
            near = any(s["start_m"] - tol <= x <= s["end_m"] + tol for s in segs)
            colocation.append({"position_m": x, "das_hot": near, "botdr_peak": True,
                               "colocated": near})
        for s in segs:
            has_static = any(s["start_m"] - tol <= pk["position_m"] <= s["end_m"] + tol
                             for pk in peaks)
            if not has_static:
                mid = (s["start_m"] + s["end_m"]) / 2.0
                if lo_b <= mid <= hi_b:
                    colocation.append({"position_m": mid, "das_hot": True,
                                       "botdr_peak": False, "colocated": False})
        colocation.sort(key=lambda c: c["position_m"])

    def _tone_dicts(tones):
        tones = tones or {}
        return {win: [t.to_dict() for t in dets] for win, dets in sorted(tones.items())}

    return CrossModalReport(
        present=present,
        wind=wind_info,
        wind_das_correlation=correlation,
        das_hot_segments=segs,
        delta_eps_peaks=peaks,
        tones={"das": _tone_dicts(das_tones), "sop": _tone_dicts(sop_tones)},
        sop=sop_summary,
        colocation=colocation,
        notes=list(notes),
    )
