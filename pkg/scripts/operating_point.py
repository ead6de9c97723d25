#!/usr/bin/env python3
"""Print the crystal operating point for one pump setting.

Usage:
    python3 scripts/operating_point.py --pump-nm 810 --pump-fwhm-nm 4

Shows the quantities everything downstream depends on: walk-offs, poling
period, ridge angle, mode count, and the two coincidence widths with and
without the reference 100e-27 s^2 of one-arm dispersion.
"""

import argparse
import math
import sys

from biphoton.coincidence import (
    ClosedFormContext,
    fwhm_local_closed,
    fwhm_nonlocal_closed,
    visibility_closed,
)
from biphoton.crystal import make_crystal, qpm_period_for, walkoffs
from biphoton.experiments import BETA_REFERENCE
from biphoton.jsa import pmf_angle, sigma_from_bandwidth
from biphoton.schmidt import gaussian_schmidt_number


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pump-nm", type=float, default=810.0)
    parser.add_argument("--pump-fwhm-nm", type=float, default=4.0)
    parser.add_argument("--length-mm", type=float, default=10.0)
    parser.add_argument("--crystal", default=None, help="Sellmeier coefficient file")
    args = parser.parse_args(argv)

    crystal = make_crystal(args.length_mm * 1e-3, args.crystal)
    lam = args.pump_nm * 1e-9
    pair = walkoffs(crystal, lam)
    sigma = sigma_from_bandwidth(lam, args.pump_fwhm_nm * 1e-9)
    plain = ClosedFormContext(sigma, pair.tau_s, pair.tau_i)
    dispersed = ClosedFormContext(
        sigma, pair.tau_s, pair.tau_i, beta_s=BETA_REFERENCE
    )

    print(f"pump                 {args.pump_nm:g} nm, FWHM {args.pump_fwhm_nm:g} nm")
    print(f"sigma_p              {sigma:.6g} rad/s")
    print(f"poling period        {qpm_period_for(crystal, lam) * 1e6:.4f} um")
    print(f"tau_s (TE)           {pair.tau_s * 1e12:+.4f} ps")
    print(f"tau_i (TM)           {pair.tau_i * 1e12:+.4f} ps")
    print(f"ridge angle          {math.degrees(pmf_angle(pair)):+.2f} deg")
    print(f"Schmidt number K     {gaussian_schmidt_number(pair, sigma):.4f}")
    print(f"local dip FWHM       {fwhm_local_closed(plain) * 1e12:.4f} ps")
    print(f"  with beta_s ref    {fwhm_local_closed(dispersed) * 1e12:.4f} ps")
    print(f"local visibility     {visibility_closed(dispersed):.4f}")
    print(f"nonlocal peak FWHM   {fwhm_nonlocal_closed(plain) * 1e12:.4f} ps")
    print(f"  with beta_s ref    {fwhm_nonlocal_closed(dispersed) * 1e12:.4f} ps")
    return 0


if __name__ == "__main__":
    sys.exit(main())
