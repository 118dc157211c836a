"""Regenerate data/scenario.csv, the bundled synthetic macro data set.

The credit index is built from a probit-linear model on one-quarter-lagged
macro variables plus mild noise, so fitting with --lag 1 recovers the
coefficients approximately.  Deterministic by seed; the committed file should
only change if this script changes.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy.special import ndtr

SEED = 7
N_PERIODS = 24
BETA0 = -2.05
BETA_GDP = -0.14
BETA_UNEMP = 0.09
NOISE_SD = 0.07
LAG = 1


def main() -> None:
    rng = np.random.default_rng(SEED)
    # draw one extra macro observation: row t of the file shows the macro
    # values that drive the credit index of row t + 1
    gdp = np.round(rng.normal(2.0, 1.4, N_PERIODS + LAG), 2)
    unemp = np.round(rng.normal(5.8, 0.9, N_PERIODS + LAG), 2)
    noise = rng.normal(0.0, NOISE_SD, N_PERIODS)
    probit = BETA0 + BETA_GDP * gdp[:N_PERIODS] + BETA_UNEMP * unemp[:N_PERIODS] + noise
    credit_index = ndtr(probit)

    years = [2018 + (i // 4) for i in range(N_PERIODS)]
    quarters = [(i % 4) + 1 for i in range(N_PERIODS)]
    lines = ["period,credit_index,gdp_growth,unemployment_rate"]
    for t in range(N_PERIODS):
        lines.append(f"{years[t]}Q{quarters[t]},{credit_index[t]:.6f},"
                     f"{gdp[t + LAG]:.2f},{unemp[t + LAG]:.2f}")
    target = Path(__file__).resolve().parent.parent / "data" / "scenario.csv"
    target.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
