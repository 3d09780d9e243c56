"""
Twisted Alexander polynomials and volume
========================================

Twisting the Alexander polynomial by the holonomy of the hyperbolic structure
gives a polynomial whose Mahler measure tracks the hyperbolic volume closely.
This walks through the bundled census and prints the ratio for each knot.
"""

from importlib import resources

from knotvol import Sample, average, load_rep, parse_census, pearson_r, twisted_alexander

data = resources.files("knotvol") / "data"
with (data / "census.csv").open(encoding="utf-8") as fh:
    census = parse_census(fh)

pairs = []
for rec in census:
    if not rec.rep_path:
        continue
    with (data / rec.rep_path).open(encoding="utf-8") as fh:
        rep = load_rep(fh, rec.pd)
    tw = twisted_alexander(rec.pd, rep)
    pairs.append((tw.log_mahler, rec.volume))
    print(f"{rec.name:10s} vol {rec.volume:8.4f}  ln m(T) {tw.log_mahler:8.4f}  ratio {tw.log_mahler / rec.volume:.4f}")

sample = Sample.from_pairs(pairs)
print("knots:", len(pairs))
print("average ln m(T) / vol:", average(sample, "phi_over_vol"))
if len(pairs) > 1:
    print("Pearson r:", pearson_r(sample))
