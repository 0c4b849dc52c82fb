"""Exact desk-scale checks of free-fermion dual pairs and W-infinity modules."""

from .exact import Rational, SparseMat, SparseVec, joint_kernel, kernel_basis, rank, rref
from .fock import FockConfig, FockVector, WindowError, basis, graded_dim, tau, vacuum
from .qseries import QSeries, ch_v1plus, gauss_rhs, partition_count
from .repops import RelationReport, commutator, op_E, op_J, op_W, op_dinf, relation_suites
from .duality import (
    IsotypicReport,
    PartitionA,
    PartitionD,
    decode_labels,
    reconcile_signs,
    verify_duality,
    virasoro_content_checks,
)
from .symalg import DiffOp, ExponentSet, labels_from_exponents

__version__ = "0.1.0"
