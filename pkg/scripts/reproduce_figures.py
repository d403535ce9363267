"""Rerun the three convergence studies and write CSV, gnuplot and JSON output.

    python scripts/reproduce_figures.py [OUTDIR]

Prints a table of fitted against predicted rates.  If gnuplot is on PATH the
scripts are rendered to PNG as well.
"""

import json
import shutil
import subprocess
import sys
from contextlib import redirect_stdout
from io import StringIO
from pathlib import Path

from mobius_quad import cli


def main(outdir: Path) -> int:
    buf = StringIO()
    with redirect_stdout(buf):
        code = cli.cmd_converge_figures(outdir)
    report = json.loads(buf.getvalue())["figures"]

    print(f"{'fig':>3} {'f':>3} {'upsilon':>7} {'predicted':>10} {'fitted':>9}  regime")
    for fig in report:
        for s in fig["studies"]:
            pred = "exp" if s["predicted_exponential"] else f"{s['predicted_rate']:.2f}"
            if s["regime"] == "exponential":
                fitted = f"e^-{s['exponential_rate']:.2f}n"
            else:
                fitted = "-" if s["fitted_rate"] is None else f"{s['fitted_rate']:.3f}"
            print(f"{fig['figure']:>3} {s['preset']:>3} {s['upsilon']:>7g} {pred:>10} {fitted:>9}  "
                  f"{s['regime']}")

    if shutil.which("gnuplot"):
        for gp in sorted(outdir.glob("figure*.gp")):
            png = gp.with_suffix(".png")
            script = f"set terminal pngcairo size 800,600\nset output '{png.name}'\n" + gp.read_text()
            subprocess.run(["gnuplot"], input=script, text=True, cwd=outdir, check=True)
            print(f"wrote {png}")
    print(f"output in {outdir}")
    return code


if __name__ == "__main__":
    sys.exit(main(Path(sys.argv[1] if len(sys.argv) > 1 else "figures")))
