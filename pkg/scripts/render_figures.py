"""Write SVG portraits and CSV samples for the exemplar fields."""
import argparse
from pathlib import Path

from circlestab import (AccumOsc, BumpPsi, CircleField, Constant, FourierCos, FourierSin, OddTheta,
                        OddThetaHat, PlateauPhi, __version__, find_fixed_points, render_portrait)

FIGURES = {
    "stable_portrait": CircleField((FourierSin(1), FourierCos(2, 0.4), Constant(0.1)), "stable field"),
    "bump": CircleField((BumpPsi(0.0, 1.0),), "bump on one period"),
    "plateau": CircleField((PlateauPhi(0.4, 0.6, 0.1),), "plateau bump"),
    "odd_bump": CircleField((OddTheta(0.5, 0.2),), "odd bump"),
    "odd_plateau": CircleField((OddThetaHat(0.45, 0.55, 0.1),), "odd plateau bump"),
    "accumulation": CircleField((AccumOsc(0.5, 0.2),), "accumulating zeros"),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures")
    ap.add_argument("--resolution", type=int, default=1024)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, field in FIGURES.items():
        svg, csv_text = render_portrait(field, find_fixed_points(field), args.resolution, __version__)
        (out / f"{name}.svg").write_text(svg)
        (out / f"{name}.csv").write_text(csv_text)
        print(f"{name}: {find_fixed_points(field).count} isolated zeros -> {out / name}.svg")


if __name__ == "__main__":
    main()
