#!/usr/bin/env python3
"""Generate the synthetic CH4 and N2O line lists shipped in data/.

The files use the 160-character HITRAN 2016 `.par` record layout. Line
positions follow rigid-rotor branch formulas, intensities a Boltzmann
population times a simple Honl-London weight, normalised to a chosen band
strength. They are stand-ins for database extracts: realistic in band
position, line density and magnitude, not in individual line parameters.

    python3 tools/make_linelists.py data/
"""
import math
import random
import sys
from pathlib import Path

C2 = 1.4387769  # second radiation constant, cm K
T_REF = 296.0


def fortran_f(value, width, decimals):
    text = f"{value:{width}.{decimals}f}"
    if len(text) > width:
        text = text.replace("0.", ".", 1)
    if len(text) != width:
        raise ValueError(f"{value} does not fit F{width}.{decimals}")
    return text


def record(molec, iso, nu, sw, a, g_air, g_self, elower, n_air, d_air, upper, lower):
    line = (
        f"{molec:2d}{iso:1d}"
        + fortran_f(nu, 12, 6)
        + f"{sw:10.3E}"
        + f"{a:10.3E}"
        + fortran_f(g_air, 5, 4)
        + fortran_f(g_self, 5, 3)
        + fortran_f(elower, 10, 4)
        + fortran_f(n_air, 4, 2)
        + fortran_f(d_air, 8, 6)
        + f"{upper:>15s}{lower:>15s}{'':>15s}{'':>15s}"
        + "000000"
        + " 0 0 0 0 0 0"
        + " "
        + f"{0.0:7.1f}{0.0:7.1f}"
    )
    assert len(line) == 160, len(line)
    return line


def ch4_lines(rng):
    """nu3 band of 12CH4 (and a 13CH4 copy), plus a weak-line forest."""
    nu0, b, zeta = 3018.92, 5.241, 0.055
    spacing = 2.0 * b * (1.0 - zeta)
    raw = []  # (nu, weight, elower, J, branch)

    def add_manifold(center, weight, elower, j, branch):
        ncomp = j + 1
        for k in range(ncomp):
            off = 0.0 if ncomp == 1 else (k / (ncomp - 1) - 0.5) * 0.04 * j
            raw.append((center + off, weight / ncomp, elower, j, branch))

    for j in range(0, 15):
        e = b * j * (j + 1)
        pop = (2 * j + 1) ** 2 * math.exp(-C2 * e / T_REF)
        if j <= 11:
            add_manifold(nu0 + spacing * (j + 1) - 0.01 * (j + 1) ** 2, pop * (j + 1) / (2 * j + 1), e, j, "R")
        if j >= 1:
            add_manifold(nu0 - spacing * j - 0.01 * j * j, pop * j / (2 * j + 1), e, j, "P")
            add_manifold(nu0 - 0.018 * j * (j + 1), pop * 0.45, e, j, "Q")

    total = sum(w for _, w, *_ in raw)
    band_strength = 1.0e-17
    lines = []
    for nu, w, e, j, br in raw:
        sw = band_strength * w / total * nu / nu0
        g_air = 0.0640 - 0.0008 * j
        lines.append((6, 1, nu, sw, e, g_air, g_air + 0.016, 0.75 - 0.01 * j, -0.0050 - 0.0002 * j, j, br))
        lines.append((6, 2, nu - 9.62, sw * 0.0111, e, g_air, g_air + 0.016, 0.75 - 0.01 * j, -0.0050, j, br))

    # Weak-line forest (hot bands, high-J lines) confined to the P/Q/R span.
    forest = 10000 - len(lines)
    for _ in range(forest):
        nu = rng.uniform(2862.0, 3136.0)
        sw = 10 ** rng.uniform(-25.0, -21.7)
        e = rng.uniform(300.0, 2500.0)
        g_air = rng.uniform(0.045, 0.070)
        lines.append((6, 1, nu, sw, e, g_air, g_air + 0.015, rng.uniform(0.55, 0.80), rng.uniform(-0.009, -0.002), 0, "X"))
    return lines


def n2o_lines(rng):
    """Weak Sigma-Sigma band of 14N2O near 2563 cm-1 with a hot-band copy."""
    bands = [(2563.34, 0.41901, 0.41720, 1.0, 0.0, 1), (2552.10, 0.41921, 0.41740, 0.08, 588.77, 1)]
    raw = []
    for nu0, b_lo, b_up, rel, e_vib, iso in bands:
        for j in range(0, 70):
            e = e_vib + b_lo * j * (j + 1)
            pop = (2 * j + 1) * math.exp(-C2 * e / T_REF)
            m_r, m_p = j + 1, -j
            for m, br in ((m_r, "R"), (m_p, "P")):
                if m == 0:
                    continue
                nu = nu0 + (b_up + b_lo) * m + (b_up - b_lo) * m * m
                raw.append((iso, nu, rel * pop * abs(m) / (2 * j + 1), e, j, br))
    total = sum(r[2] for r in raw)
    band_strength = 1.3e-18
    lines = []
    for iso, nu, w, e, j, br in raw:
        sw = band_strength * w / total
        if sw < 1e-26:
            continue
        g_air = max(0.060, 0.0950 - 0.0004 * j)
        lines.append((4, iso, nu, sw, e, g_air, g_air + 0.020, 0.76, -0.0021, j, br))
    return lines


def write(path, lines, einstein_a):
    lines = sorted(lines, key=lambda r: r[2])
    with open(path, "w") as fh:
        for molec, iso, nu, sw, e, g_air, g_self, n_air, d_air, j, br in lines:
            upper = "0 0 1 0" if molec == 6 else "2 0 0 0"
            lower = f"{br}{j:3d}" if br != "X" else "hot"
            fh.write(record(molec, iso, nu, sw, einstein_a, g_air, g_self, e, n_air, d_air, upper, lower) + "\n")
    print(f"{path}: {len(lines)} records")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20220401)
    write(out / "CH4_synthetic.par", ch4_lines(rng), 2.1e1)
    write(out / "N2O_synthetic.par", n2o_lines(rng), 4.0e0)


if __name__ == "__main__":
    main()
