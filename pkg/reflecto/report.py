"""Analysis pipeline results and their two renderings.

JSON documents are plain dicts built in a fixed key order, so identical
inputs and seeds give byte-identical output. Human output goes through rich
tables; station-indexed matrices are shown under the input's station numbers.
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from rich.console import Console
from rich.table import Table

from reflecto.errors import DimensionError, NotCompletelySError
from reflecto.matrix_classes import ClassReport, classify, thm1_classify, thm2_applicable
from reflecto.network import DerivedMatrices, NetworkSpec, TrafficReport, derive, reorder_to_original, traffic
from reflecto.rational import RatMatrix, format_rat
from reflecto.tightness import (
    TightMatrixDecision,
    TightnessVerdict,
    VerificationReport,
    assignment_to_table,
    build_system,
    check_tight_system,
    decide_tight_matrix,
    relabel_assignment,
    relabel_vector,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnalysisReport:
    """
    Everything analyze reports

    classes, verdict and decision are indexed by the input's station numbers,
    matching derived.R_original_order(); banded_pattern is checked on the
    relabeled R.
    """

    spec: NetworkSpec
    derived: DerivedMatrices
    traffic: TrafficReport
    classes: Optional[ClassReport] = None
    verdict: Optional[TightnessVerdict] = None
    decision: Optional[TightMatrixDecision] = None
    banded_pattern: Optional[bool] = None
    # set when tightness is undefined for R
    tightness_note: Optional[str] = None


def _subset_to_input(subset: Optional[Tuple[int, ...]], relabel: Sequence[int]) -> Optional[Tuple[int, ...]]:
    return None if subset is None else tuple(sorted(relabel[i] for i in subset))


def _verdict_to_input(verdict: TightnessVerdict, relabel: Sequence[int]) -> TightnessVerdict:
    witness = None if verdict.witness is None else relabel_assignment(verdict.witness, relabel)
    return replace(verdict, b=relabel_vector(verdict.b, relabel), witness=witness)


def _decision_to_input(decision: TightMatrixDecision, relabel: Sequence[int]) -> TightMatrixDecision:
    return replace(
        decision,
        b_witness=None if decision.b_witness is None else relabel_vector(decision.b_witness, relabel),
        witness=None if decision.witness is None else relabel_assignment(decision.witness, relabel),
        tested_b=tuple(relabel_vector(b, relabel) for b in decision.tested_b),
    )


def run_analysis(
    spec: NetworkSpec,
    b: Optional[Sequence[Fraction]] = None,
    samples: int = 20,
    seed: int = 0,
    aux_bounded: bool = True,
    epsilon: Fraction = Fraction(1, 2),
    dim_cap: int = 12,
) -> AnalysisReport:
    """
    Derive every network matrix, then classify R and decide its tightness

    b is given in input station order. The decision runs on the relabeled R
    and its witness, b vectors and failing subsets are mapped back to input
    station numbers. An undefined R (Q singular) or an R that is not
    completely-S still gives a complete report; the reason is kept in
    tightness_note.
    """
    derived = derive(spec)
    load = traffic(spec)
    if derived.R is None:
        return AnalysisReport(spec, derived, load, tightness_note="undefined: Q singular")

    R = derived.R
    relabel = derived.relabel
    found = classify(R, dim_cap)
    classes = replace(
        found,
        s_failure=_subset_to_input(found.s_failure, relabel),
        p_failure=_subset_to_input(found.p_failure, relabel),
    )
    banded = thm2_applicable(R, dim_cap)
    if b is not None:
        if len(b) != R.rows:
            raise DimensionError(f"b has {len(b)} entries, R is {R.rows}x{R.rows}")
        internal_b = [b[old] for old in relabel]
        verdict = check_tight_system(R, internal_b, aux_bounded)
        return AnalysisReport(
            spec, derived, load, classes, verdict=_verdict_to_input(verdict, relabel), banded_pattern=banded
        )
    try:
        decision = decide_tight_matrix(R, samples, seed, aux_bounded, epsilon, dim_cap)
    except NotCompletelySError as e:
        note = str(NotCompletelySError(_subset_to_input(e.failing_subset, relabel)))
        logger.warning(note)
        return AnalysisReport(spec, derived, load, classes, banded_pattern=banded, tightness_note=note)
    return AnalysisReport(
        spec, derived, load, classes, decision=_decision_to_input(decision, relabel), banded_pattern=banded
    )


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------

def matrix_json(M: RatMatrix) -> List[List[str]]:
    return M.to_strings()


def vector_json(values: Sequence[Fraction]) -> List[str]:
    return [format_rat(v) for v in values]


def _subset_json(subset: Optional[Tuple[int, ...]]) -> Optional[List[int]]:
    return None if subset is None else [i + 1 for i in subset]


def class_report_json(
    R: RatMatrix, report: ClassReport, dim_cap: int = 12, banded: Optional[bool] = None
) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "completely_s": report.is_completely_s,
        "p_matrix": report.is_p,
        "m_matrix": report.is_m,
        "positive_definite": report.is_positive_definite,
        "s_failing_subset": _subset_json(report.s_failure),
        "p_failing_subset": _subset_json(report.p_failure),
        "thm1_case": thm1_classify(R).value if R.shape == (2, 2) else None,
        "thm2_applicable": thm2_applicable(R, dim_cap) if banded is None else banded,
    }
    return doc


def verdict_json(R: RatMatrix, verdict: TightnessVerdict) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "tight": verdict.tight,
        "b": vector_json(verdict.b),
        "lp_status": verdict.lp_status.value,
        "optimum": None if verdict.optimum is None else format_rat(verdict.optimum),
        "variable_count": verdict.variable_count,
        "witness": None,
    }
    if verdict.witness is not None:
        system = build_system(R, verdict.b)
        doc["witness"] = assignment_to_table(system, verdict.witness)
    return doc


def decision_json(R: RatMatrix, decision: TightMatrixDecision) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "status": decision.status.value,
        "method": None if decision.method is None else decision.method.value,
        "aux_bounded": decision.aux_bounded,
        "tested_b": [vector_json(b) for b in decision.tested_b],
        "b_witness": None if decision.b_witness is None else vector_json(decision.b_witness),
        "witness": None,
    }
    if decision.witness is not None:
        system = build_system(R, decision.b_witness, decision.aux_bounded)
        doc["witness"] = assignment_to_table(system, decision.witness)
    return doc


def verification_json(report: VerificationReport) -> Dict[str, Any]:
    return {
        "passed": report.passed,
        "all_ones": report.is_all_ones,
        "nontrivial_witness": report.is_nontrivial_witness,
        "first_failure": report.first_failure,
        "failures": report.failures,
        "checked": len(report.checks),
    }


def analysis_json(report: AnalysisReport, dim_cap: int = 12) -> Dict[str, Any]:
    derived = report.derived
    sets = derived.sets
    relabel = derived.relabel
    # relabeled station i is input station relabel[i]
    doc: Dict[str, Any] = {
        "input": {
            "classes": report.spec.n_classes,
            "stations": report.spec.n_stations,
        },
        "relabel": [i + 1 for i in relabel],
        "structure": {
            "constituency": {
                str(relabel[i] + 1): [k + 1 for k in C] for i, C in enumerate(derived.spec.constituency)
            },
            "lowest": {str(relabel[i] + 1): k + 1 for i, k in enumerate(sets.lowest)},
            "low_classes": sorted(k + 1 for k in sets.L_set),
            "high_classes": sorted(k + 1 for k in sets.H_set),
            "k_plus": {str(k + 1): c + 1 for k, c in sorted(sets.k_plus.items())},
        },
        "W": matrix_json(derived.W),
        "B": matrix_json(derived.B),
        "F": matrix_json(derived.F),
        "A": matrix_json(derived.A),
        "A_inv": matrix_json(derived.A_inv),
        "Q": matrix_json(derived.Q),
        "R": matrix_json(derived.R) if derived.R is not None else "undefined: Q singular",
        "R_input_order": matrix_json(derived.R_original_order()) if derived.R is not None else None,
        "traffic": {
            "alpha": vector_json(report.traffic.alpha),
            "rho": vector_json(report.traffic.rho),
            "heavy_traffic": report.traffic.heavy_traffic,
        },
        "classification": None,
        "tightness": None,
    }
    R_input = derived.R_original_order()
    # classification subsets and every tightness vector refer to R_input_order
    if report.classes is not None:
        doc["classification"] = class_report_json(R_input, report.classes, dim_cap, report.banded_pattern)
    if report.verdict is not None:
        doc["tightness"] = verdict_json(R_input, report.verdict)
    elif report.decision is not None:
        doc["tightness"] = decision_json(R_input, report.decision)
    elif report.tightness_note is not None:
        doc["tightness"] = {"status": "Undefined", "reason": report.tightness_note}
    return doc


# ---------------------------------------------------------------------------
# human output
# ---------------------------------------------------------------------------

def matrix_table(title: str, M: RatMatrix, labels: Optional[Sequence[str]] = None) -> Table:
    labels = list(labels) if labels is not None else [str(i + 1) for i in range(max(M.rows, M.cols))]
    table = Table(title=title, show_header=True, header_style="bold")
    table.add_column("", style="bold")
    for j in range(M.cols):
        table.add_column(labels[j], justify="right")
    for i, row in enumerate(M.to_strings()):
        table.add_row(labels[i], *row)
    return table


def _flag(value: bool) -> str:
    return "[green]yes[/green]" if value else "[red]no[/red]"


def print_class_report(
    console: Console, R: RatMatrix, report: ClassReport, dim_cap: int = 12, banded: Optional[bool] = None
):
    doc = class_report_json(R, report, dim_cap, banded)
    table = Table(title="Matrix classes", show_header=False)
    table.add_column("property")
    table.add_column("value")
    table.add_row("completely-S", _flag(report.is_completely_s))
    table.add_row("P-matrix", _flag(report.is_p))
    table.add_row("M-matrix", _flag(report.is_m))
    table.add_row("positive definite", _flag(report.is_positive_definite))
    if report.s_failure is not None:
        table.add_row("not S on", "{" + ",".join(map(str, doc["s_failing_subset"])) + "}")
    if report.p_failure is not None:
        table.add_row("nonpositive minor on", "{" + ",".join(map(str, doc["p_failing_subset"])) + "}")
    if doc["thm1_case"] is not None:
        table.add_row("2x2 case", doc["thm1_case"])
    table.add_row("banded P-pattern", _flag(doc["thm2_applicable"]))
    console.print(table)


def print_witness(console: Console, table: Dict[str, str]):
    out = Table(title="Witness (non-all-ones solution)")
    out.add_column("variable")
    out.add_column("value", justify="right")
    for key, value in table.items():
        out.add_row(key, value if value != "1" else f"[dim]{value}[/dim]")
    console.print(out)


def print_verdict(console: Console, R: RatMatrix, verdict: TightnessVerdict):
    doc = verdict_json(R, verdict)
    b = ",".join(doc["b"])
    if verdict.tight:
        console.print(f"(R, b={b}) is [green]tight[/green]: LP minimum {doc['optimum']} = {verdict.variable_count}")
    else:
        console.print(f"(R, b={b}) is [red]not tight[/red] (LP {doc['lp_status']})")
        print_witness(console, doc["witness"])


def print_decision(console: Console, R: RatMatrix, decision: TightMatrixDecision):
    doc = decision_json(R, decision)
    if doc["method"] is not None:
        console.print(f"Tightness: [green]{doc['status']}[/green] by {doc['method']}")
    elif decision.witness is not None:
        console.print(f"Tightness: [red]{doc['status']}[/red] for b = ({','.join(doc['b_witness'])})")
        print_witness(console, doc["witness"])
    else:
        console.print(
            f"Tightness: [yellow]{doc['status']}[/yellow]: tight for all {len(decision.tested_b)} "
            f"tested b, no proof"
        )


def print_verification(console: Console, report: VerificationReport):
    doc = verification_json(report)
    if report.is_nontrivial_witness:
        console.print(f"[green]valid non-trivial witness[/green] ({doc['checked']} checks)")
    elif report.passed:
        console.print("[yellow]assignment is all-ones: it satisfies the system but proves nothing[/yellow]")
    else:
        console.print(f"[red]witness fails[/red] {len(doc['failures'])} check(s); first: {doc['first_failure']}")


def print_analysis(console: Console, report: AnalysisReport, dim_cap: int = 12):
    derived = report.derived
    relabel = derived.relabel
    classes = [str(k + 1) for k in range(report.spec.n_classes)]
    stations = [str(i + 1) for i in range(report.spec.n_stations)]

    if relabel != tuple(range(len(relabel))):
        console.print(f"Stations relabeled; internal order is input stations {[i + 1 for i in relabel]}")
        console.print("Subsets, b vectors and witnesses below use input station numbers.")
    lowest = {relabel[i] + 1: k + 1 for i, k in enumerate(derived.sets.lowest)}
    console.print("Lowest-priority class per station: " + ", ".join(f"{i}: {lowest[i]}" for i in sorted(lowest)))

    for name, M in (("W", derived.W), ("B", derived.B), ("F", derived.F), ("A", derived.A)):
        console.print(matrix_table(name, M, classes))
    console.print(matrix_table("Q", reorder_to_original(derived.Q, relabel), stations))
    if derived.R is None:
        console.print("[red]R undefined: Q singular[/red]")
    else:
        console.print(matrix_table("R", derived.R_original_order(), stations))

    load = report.traffic
    console.print("alpha = (" + ", ".join(vector_json(load.alpha)) + ")")
    console.print("rho = (" + ", ".join(vector_json(load.rho)) + ")" + (" heavy traffic" if load.heavy_traffic else ""))

    R_input = derived.R_original_order()
    if report.classes is not None:
        print_class_report(console, R_input, report.classes, dim_cap, report.banded_pattern)
    if report.verdict is not None:
        print_verdict(console, R_input, report.verdict)
    elif report.decision is not None:
        print_decision(console, R_input, report.decision)
    elif report.tightness_note is not None:
        console.print(f"Tightness: {report.tightness_note}")
