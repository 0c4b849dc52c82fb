"""Charge decomposition of one charged fermion pair, counted three ways."""

from dualpairs.fock import FockConfig, graded_dim
from dualpairs.qseries import charged_fermion_product, jacobi_triple_form, partition_count

ORDER = 6
cfg = FockConfig(1, False, 2 * ORDER)
fermionic = charged_fermion_product(2 * ORDER)
bosonic = jacobi_triple_form(2 * ORDER)
print("product == sum form:", fermionic == bosonic)

for m in range(-2, 3):
    row = []
    for e2 in range(m * m, 2 * ORDER + 1, 2):
        row.append(graded_dim(cfg, (m,), e2))
    # each charge sector starts at q^(m^2/2) and then counts partitions
    want = [partition_count(k) for k in range(len(row))]
    print(f"charge {m:+d}: {row}  partitions: {row == want}")
