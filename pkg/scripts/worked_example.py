"""The two six-point ladder filtrations with equal row barcodes but different cPDs."""

import argparse
from pathlib import Path

from cladder.cpd import connected_pd, render_cpd
from cladder.filtrations import EXAMPLE_RADII, example_filtration, homology_rep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--svg-dir", type=Path, default=None, help="write one SVG per configuration")
    ap.add_argument("--style", choices=["triangles", "layered"], default="triangles")
    args = ap.parse_args()
    for which in ("a", "b"):
        D = connected_pd(homology_rep(example_filtration(which), 1), axis_labels=EXAMPLE_RADII)
        print(f"X_{which}: lower {dict(D.lower)}  upper {dict(D.upper)}  connecting {dict(D.connecting)}")
        if args.svg_dir:
            args.svg_dir.mkdir(parents=True, exist_ok=True)
            (args.svg_dir / f"example_{which}.svg").write_text(render_cpd(D, args.style))


if __name__ == "__main__":
    main()
