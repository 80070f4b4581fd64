#!/usr/bin/env python3
"""Regenerate the checked-in reference scenario and wind fixtures.

The segment table encodes the one-time calibration against the storm
targets: coupling values are (target dynamic std in nanostrain) / 26, and
static gains are (target static offset in microstrain) / 26, where 26 m/s
is the fused peak wind exceedance (29 m/s peak minus the 3 m/s calm
threshold). Desk-scale timeline: 30 minutes, storm window from minute 9 to
minute 24, wind peaking at 29 m/s at minute 16.5.

Run from the repo root:  python scripts/make_reference.py
"""

import math
import os
from datetime import datetime, timedelta, timezone

REF_DIR = os.path.join(os.path.dirname(__file__), "..",
                       "src", "fibersense", "data", "reference")
TESTS_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "data")

T0 = datetime(2025, 8, 5, 12, 0, tzinfo=timezone.utc)


def desk_wind(t_s):
    """Fused desk-scale wind profile (m/s) at offset t_s from T0."""
    if t_s <= 480:
        return 2.0
    if t_s <= 990:
        return 2.0 + 27.0 * (1.0 - math.cos(math.pi * (t_s - 480) / 510.0)) / 2.0
    if t_s <= 1440:
        return 4.0 + 25.0 * (1.0 + math.cos(math.pi * (t_s - 990) / 450.0)) / 2.0
    return 4.0


def write_desk_wind(path):
    rows = ["timestamp,station_id,speed_mps"]
    for i in range(-2, 65):  # 30 s cadence over [-60 s, 1920 s]
        t = i * 30
        ts = (T0 + timedelta(seconds=t)).isoformat().replace("+00:00", "Z")
        w = desk_wind(t)
        rows.append(f"{ts},coastal,{w + 1.5:.6f}")
        rows.append(f"{ts},offshore,{max(w - 1.5, 0.0):.6f}")
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")


def storm_wind_3day(t_h):
    """Fused 3-day storm profile (m/s), hours since 2025-08-04T00:00Z."""
    if t_h <= 9:  # calm night, 6 m/s by the morning of day 1
        return 4.0 + 2.0 * t_h / 9.0
    if t_h <= 38:  # build to the peak at 14:00 on day 2
        return 6.0 + 23.0 * (1.0 - math.cos(math.pi * (t_h - 9) / 29.0)) / 2.0
    if t_h <= 60:  # decline to normal by noon on day 3
        return 5.0 + 24.0 * (1.0 + math.cos(math.pi * (t_h - 38) / 22.0)) / 2.0
    return 5.0


def write_3day_wind(path):
    start = datetime(2025, 8, 4, 0, 0, tzinfo=timezone.utc)
    rows = ["timestamp,station_id,speed_mps"]
    for h in range(0, 73):
        ts = (start + timedelta(hours=h)).isoformat().replace("+00:00", "Z")
        w = storm_wind_3day(h)
        rows.append(f"{ts},coastal,{w + 2.0:.6f}")
        rows.append(f"{ts},offshore,{max(w - 2.0, 0.0):.6f}")
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")


# calibrated segment table: (start_m, end_m, kind, std_ne_target, static_ue_target, tone)
SEGMENTS = [
    (0,      500,    "onshore",    0.10,  0,   None),
    (500,    1000,   "fjord",      1.30,  82,  None),
    (1000,   2500,   "fjord",      1.04,  0,   ("2.2", "1.5", "storm")),
    (2500,   5000,   "fjord",      0.52,  0,   None),
    (5000,   6000,   "fjord",      2.00,  0,   None),
    (6000,   6350,   "fjord",      2.30,  90,  None),
    (6350,   6700,   "fjord",      2.50,  140, None),
    (6700,   7300,   "fjord",      2.90,  180, None),
    (7300,   7600,   "fjord",      2.40,  160, None),
    (7600,   8300,   "fjord",      2.20,  150, None),
    (8300,   8900,   "fjord",      1.70,  100, None),
    (8900,   9500,   "fjord",      1.40,  50,  None),
    (9500,   12000,  "transition", 1.80,  0,   None),
    (12000,  14000,  "offshore",   0.80,  0,   ("2.4", "1.5", "always")),
    (14000,  14500,  "offshore",   0.30,  0,   None),
    (14500,  16000,  "offshore",   1.30,  0,   None),
    (16000,  20000,  "offshore",   0.50,  0,   None),
    (20000,  118000, "offshore",   0.65,  0,   None),
]

PEAK_EXCEEDANCE = 26.0  # 29 m/s fused peak - 3 m/s calm threshold
STORM_WINDOW = ("2025-08-05T12:09:00Z", "2025-08-05T12:24:00Z")


def write_scenario(path):
    lines = [
        "schema: scenario1",
        "seed: 20250805",
        "wind_csv: wind_desk.csv",
        "calm_threshold_mps: 3.0",
        "band_hz: [0.05, 5.0]",
        "correlation_length_m: 500.0",
        f'storm_window: ["{STORM_WINDOW[0]}", "{STORM_WINDOW[1]}"]',
        "noise:",
        "  das_phase_std_rad: 0.03",
        "  botdr_single_shot_std: 0.3",
        "  sop_detector_std: 0.003",
        "segments:",
    ]
    for start, end, kind, std_ne, static_ue, tone in SEGMENTS:
        coupling = std_ne / PEAK_EXCEEDANCE
        gain = static_ue / PEAK_EXCEEDANCE
        line = (f"  - {{start_m: {start}, end_m: {end}, kind: {kind}, "
                f"coupling: {coupling:.6f}, static_gain: {gain:.6f}")
        if tone:
            freq, amp, window = tone
            win = ("null" if window == "always"
                   else f'["{STORM_WINDOW[0]}", "{STORM_WINDOW[1]}"]')
            line += (f", oscillation: {{freq_hz: {freq}, amplitude_ne: {amp}, "
                     f"window: {win}}}")
        line += "}"
        lines.append(line)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


RUN_YAML = """\
schema: run1
scenario: scenario.yaml
t0: "2025-08-05T12:00:00Z"
output_dir: out
modalities: {das: true, botdr: true, sop: true}
das:
  start_m: 0.0
  span_m: 20000.0
  spacing_m: 10.0
  duration_s: 1800.0
  block_t: 6000
  block_x: 10
  spectrogram_positions_m: [1500.0, 13000.0]
  tone_freqs_hz: [2.2, 2.4]
  bandpower_window_s: 30.0
  stft_window: 4096
botdr:
  spacing_m: 10.0
  pulse_width_us: 2.5
  averages: 4000
sop:
  duration_s: 1800.0
  driver_spacing_m: 250.0
  driver_prf_hz: 600.0
  window_s: 5.0
  stft_window: 4096
  strain_to_retardance_rad_per_ne: 0.08
  rotation_drift_rad_s: 0.001
report:
  band_hz: [1.5, 3.0]
  prominence_db: 6.0
"""


def main():
    os.makedirs(REF_DIR, exist_ok=True)
    os.makedirs(TESTS_DIR, exist_ok=True)
    write_desk_wind(os.path.join(REF_DIR, "wind_desk.csv"))
    write_scenario(os.path.join(REF_DIR, "scenario.yaml"))
    with open(os.path.join(REF_DIR, "run.yaml"), "w") as fh:
        fh.write(RUN_YAML)
    write_3day_wind(os.path.join(TESTS_DIR, "wind_storm_3day.csv"))
    print(f"wrote reference files to {os.path.abspath(REF_DIR)}")


if __name__ == "__main__":
    main()
