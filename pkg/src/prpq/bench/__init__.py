"""Workload generation and benchmarking."""
from .graphgen import L0_LIKE, GraphGenSpec, gen_graph
from .runner import HEADER, SuiteEntry, iter_bench, load_suite, pearson, read_rows, run_bench, write_bench
from .sat import CnfError, format_dimacs, gen_3sat, gen_3sat_text, parse_dimacs
from .templates import (
    CATEGORY, COMPLEX, D_TEMPLATES, Q_TEMPLATES, TemplateError, TemplateId, instantiate_template,
)

__all__ = [
    "CATEGORY", "COMPLEX", "CnfError", "D_TEMPLATES", "GraphGenSpec", "HEADER", "L0_LIKE",
    "Q_TEMPLATES", "SuiteEntry", "TemplateError", "TemplateId", "format_dimacs", "gen_3sat",
    "gen_3sat_text", "gen_graph", "instantiate_template", "iter_bench", "load_suite", "parse_dimacs",
    "pearson", "read_rows", "run_bench", "write_bench",
]
