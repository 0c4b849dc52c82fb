"""One neutral fermion: Virasoro at c = 1/2 and the parity split."""

from fractions import Fraction

from dualpairs.duality import descendant_dims
from dualpairs.fock import FockConfig, graded_dim, monomial_vector, phi, vacuum, vacuum_monomial
from dualpairs.repops import commutator, op_W

cfg = FockConfig(0, True, 12)
for m in (1, 2, 3):
    c = commutator(op_W(1, m, cfg), op_W(1, -m, cfg), 0).apply(vacuum(cfg))
    print(f"[W1_{m}, W1_-{m}]|0> = {c.coefficient(vacuum_monomial(cfg))} |0>",
          "expected", Fraction(m**3 - m, 12) * cfg.central_charge)

even = descendant_dims(cfg, vacuum(cfg), 0, 12)
odd = descendant_dims(cfg, monomial_vector([(phi(), -1)], cfg), 1, 12)
for e2 in range(13):
    par = e2 % 2
    got = (even if par == 0 else odd).get(e2, 0)
    print(f"energy {e2}/2 parity {par}: descendants {got}, subspace {graded_dim(cfg, None, e2, par)}")
