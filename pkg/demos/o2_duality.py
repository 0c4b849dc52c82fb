"""The O_2 decomposition of one charged pair and the labels of each sector."""

from dualpairs.duality import PartitionD, verify_duality
from dualpairs.fock import FockConfig

rep = verify_duality("o2l", FockConfig(1, False, 8))
for s in rep.sectors:
    lam = PartitionD(s["lambda"], bar=s["bar"], det=s["det"])
    print(f"{lam.label():10s} energy {s['energy2']}/2  {s['algebra_weight']:16s}"
          f" exponents {s['exponent_set']}  labels {s['labels']}")
print("\n".join(rep.notes))
print("all sectors match:", rep.passed)
