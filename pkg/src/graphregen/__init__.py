"""Regenerating codes on graphs: exact repair with intermediate processing."""

from .base import CodeParams, LinearCode, ParameterError
from .channel import DecodingError, EdgeChannel, RsCodec, resilient_ip_transmit
from .determinant import DetCode, cascade_params, det_params
from .engine import (
    BandwidthReport,
    IpMessage,
    cutset_bound,
    generic_retrieve,
    partial_file_bound,
    partial_repair,
    repair_cost,
    repair_lower_bound,
    retrieval_lower_bound,
    simulate_repair,
)
from .field import DEFAULT_P
from .gpm import GpmCode, gpm_params
from .moulin import MoulinCode, file_space, moulin_params
from .pm import PmMbrCode, PmMsrCode
from .retrieval import RetrievalPlan, plan_retrieval, retrieve_mbr_optimal, retrieve_relay
from .topology import Graph, RepairTree, build_repair_tree, running_example, select_helpers

__all__ = [
    "BandwidthReport",
    "CodeParams",
    "DEFAULT_P",
    "DecodingError",
    "DetCode",
    "EdgeChannel",
    "GpmCode",
    "Graph",
    "IpMessage",
    "LinearCode",
    "MoulinCode",
    "ParameterError",
    "PmMbrCode",
    "PmMsrCode",
    "RepairTree",
    "RetrievalPlan",
    "RsCodec",
    "build_repair_tree",
    "cascade_params",
    "cutset_bound",
    "det_params",
    "file_space",
    "generic_retrieve",
    "gpm_params",
    "moulin_params",
    "partial_file_bound",
    "partial_repair",
    "plan_retrieval",
    "repair_cost",
    "repair_lower_bound",
    "resilient_ip_transmit",
    "retrieval_lower_bound",
    "retrieve_mbr_optimal",
    "retrieve_relay",
    "running_example",
    "select_helpers",
    "simulate_repair",
]
