"""
Report Service - runs one engine operation per command and assembles the report
"""
import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from markedgroups.api.schemas import DehnStepModel, KernelRow, PieceReportModel, ReportDocument
from markedgroups.config import Config
from markedgroups.models.abels import (
    commutator_matrix,
    eigenline_coordinates,
    eigenline_invariance_check,
    eigenline_membership,
    elementary,
    m0_data,
    zinvp_from_fraction,
)
from markedgroups.models.chabauty import (
    BasicOpenSet,
    FiniteQuotientCert,
    MarkedGroup,
    default_alphabet,
    enumerate_normal_lowindex,
    in_open_set,
    isolated_in_sample,
)
from markedgroups.models.coxeter import parity_certificate, tits_is_trivial
from markedgroups.models.errors import BudgetExceededError, PreconditionError
from markedgroups.models.graphprod import (
    CommutationGraph,
    gp_is_trivial,
    gp_normalize,
    wreath_family,
    wreath_independence,
)
from markedgroups.models.indfam import FamilyHandle, is_independent
from markedgroups.models.smallcancel import DehnSolver, DehnStep, PieceReport, check_c16, max_repeated_piece
from markedgroups.models.thompson import CharacterPair, DyadicPL, evaluate_expression
from markedgroups.models.verdicts import Verdict
from markedgroups.services.presentation_service import (
    format_cox_word,
    format_presentation,
    format_word,
    parse_cox_word,
    parse_mu_spec,
    parse_open_set,
    parse_presentation,
    parse_word,
)
from markedgroups.utils.helpers import format_fraction, generate_report_id, parse_rational, timed

logger = logging.getLogger(__name__)


def piece_model(report: PieceReport) -> PieceReportModel:
    relator, position, orientation = report.second_occurrence
    return PieceReportModel(
        witness=format_word(report.witness),
        relator_index=report.relator_index,
        position=report.position,
        second_relator=relator,
        second_position=position,
        second_orientation=orientation,
        ratio=format_fraction(report.ratio),
    )


def dehn_step_model(number: int, step: DehnStep) -> DehnStepModel:
    return DehnStepModel(
        step=number,
        input_word=format_word(step.input_word),
        piece=format_word(step.piece),
        relator_index=step.relator_index,
        output_word=format_word(step.output_word),
    )


def _describe_open_set(open_set: BasicOpenSet) -> str:
    """+{must contain} -{must avoid}, words in sorted canonical form"""
    contain = ', '.join(sorted(format_word(w) for w in open_set.must_contain))
    avoid = ', '.join(sorted(format_word(w) for w in open_set.must_avoid))
    return f"+{{{contain}}} -{{{avoid}}}"


def _render_value(value: Any) -> Any:
    """JSON rendering of Thompson expression results"""
    if isinstance(value, DyadicPL):
        return [[format_fraction(x), format_fraction(y)] for x, y in value.breakpoints]
    if isinstance(value, CharacterPair):
        return {'chi0': value.chi0, 'chi1': value.chi1}
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, (list, tuple)):
        return [_render_value(v) for v in value]
    return value


class ReportService:
    """
    Orchestrates the engines behind the command-line surface:
    1. Parse the textual inputs (presentation_service)
    2. Run the engine operation under a timer
    3. Package verdict, witnesses and traces as a ReportDocument

    Inputs are canonicalised before hashing, so the report ID and every field
    except timings depend on the inputs alone.
    """

    def __init__(self, node_limit: Optional[int] = None, seed: Optional[int] = None):
        self.node_limit = Config.COXETER_NODE_LIMIT if node_limit is None else node_limit
        self.seed = Config.RANDOM_SEED if seed is None else seed
        if self.node_limit <= 0:
            raise PreconditionError("node limit must be positive")

    def _report(self, command: str, inputs: Dict[str, Any], verdict: Verdict, summary: str,
                timings: Dict[str, float], **sections) -> ReportDocument:
        report = ReportDocument(
            report_id=generate_report_id(command, inputs),
            command=command,
            verdict=verdict,
            summary=summary,
            timings=timings,
            **sections
        )
        logger.info("%s: %s (%s)", command, verdict.value, summary)
        return report

    def check_c16(self, presentation_text: str) -> ReportDocument:
        """
        Check a presentation file for the C'(1/6) condition

        Returns:
            ReportDocument with verdict ok or violation; the violation witness
            is reported as a PieceReportModel
        """
        timings: Dict[str, float] = {}
        with timed(timings, 'parse_ms'):
            alphabet, family = parse_presentation(presentation_text)
        with timed(timings, 'check_ms'):
            verdict = check_c16(family)
            longest, ratio = max_repeated_piece(family)
        canonical = format_presentation(alphabet, family)
        details = {
            'generators': list(alphabet.names),
            'relators': [format_word(r) for _, r in family.items()],
            'relator_lengths': [len(r) for _, r in family.items()],
            'longest_repeated_piece': longest,
            'longest_piece_ratio': format_fraction(ratio),
        }
        witnesses = {}
        if verdict.ok:
            summary = f"C'(1/6) holds for {len(family)} relators"
        else:
            witnesses['piece'] = piece_model(verdict.violation).model_dump()
            summary = f"Piece {format_word(verdict.violation.witness)} of relator {verdict.violation.relator_index} recurs"
        return self._report(
            'check-c16', {'presentation': canonical},
            Verdict.OK if verdict.ok else Verdict.VIOLATION, summary, timings,
            witnesses=witnesses, details=details,
        )

    def dehn(self, presentation_text: str, word_text: str, max_steps: Optional[int] = None) -> ReportDocument:
        """
        Decide triviality of a word in a C'(1/6) presentation

        Raises:
            PreconditionError: the presentation is not C'(1/6)
            BudgetExceededError: the step cap stopped Dehn's algorithm while a
                substitution was still available
        """
        steps_cap = Config.DEHN_MAX_STEPS if max_steps is None else max_steps
        timings: Dict[str, float] = {}
        with timed(timings, 'parse_ms'):
            alphabet, family = parse_presentation(presentation_text)
            word = parse_word(word_text, alphabet)
        with timed(timings, 'dehn_ms'):
            solver = DehnSolver(family)
            result, trace = solver.reduce(word, steps_cap)
            if steps_cap > 0 and len(trace) == steps_cap and result.letters and solver.reduce(result, 1)[1].steps:
                raise BudgetExceededError(f"Dehn's algorithm needs more than {steps_cap} steps")
        trivial = result.is_identity()
        traces = [dehn_step_model(n, step).model_dump() for n, step in enumerate(trace.steps, start=1)]
        noun = 'step' if len(trace) == 1 else 'steps'
        summary = f"Word is {'trivial' if trivial else 'nontrivial'} after {len(trace)} Dehn {noun}"
        return self._report(
            'dehn',
            {'presentation': format_presentation(alphabet, family), 'word': format_word(word), 'max_steps': steps_cap},
            Verdict.triviality(trivial), summary, timings,
            witnesses={'reduced_word': format_word(result)},
            traces=traces,
            details={'word_length': len(word), 'steps': len(trace), 'step_bound': len(word)},
        )

    def independent(self, presentation_text: str) -> ReportDocument:
        """Independence of the relators of a C'(1/6) presentation"""
        timings: Dict[str, float] = {}
        with timed(timings, 'parse_ms'):
            alphabet, family = parse_presentation(presentation_text)
        with timed(timings, 'independence_ms'):
            verdict = is_independent(FamilyHandle.from_relators(family))
        witnesses = {}
        if verdict.independent:
            summary = f"No relator among {len(family)} lies in the normal closure of the others"
        else:
            witnesses = {'index': verdict.index, 'relator': format_word(verdict.witness)}
            summary = f"Relator {verdict.index} lies in the normal closure of the others"
        return self._report(
            'independent', {'presentation': format_presentation(alphabet, family)},
            Verdict.OK if verdict.independent else Verdict.DEPENDENT, summary, timings,
            witnesses=witnesses,
            details={'relators': len(family)},
        )

    def wreath(self, n: int, drop: Optional[int] = None) -> ReportDocument:
        """
        Emit the wreath relators u_1..u_n and certify their independence

        With drop = s only u_s ∉ ⟨⟨u_j : j ≠ s⟩⟩ is certified; otherwise
        every member is.
        """
        if n < 1:
            raise PreconditionError("--n must be a positive integer")
        if drop is not None and drop < 1:
            raise PreconditionError("--drop must be a positive integer")
        timings: Dict[str, float] = {}
        with timed(timings, 'emit_ms'):
            family = wreath_family(n)
        targets = [drop] if drop is not None else list(range(1, n + 1))
        certificates = []
        with timed(timings, 'certify_ms'):
            for s in targets:
                J = [j for j in range(1, n + 1) if j != s]
                graph = CommutationGraph.from_distances(J)
                image = gp_normalize([(0, 1), (s, 1), (0, -1), (s, -1)], graph)
                certificates.append({
                    's': s,
                    'J': J,
                    'independent': wreath_independence(s, J),
                    'commutator_trivial_in_graph_product': gp_is_trivial(image),
                })
        ok = all(c['independent'] for c in certificates)
        if drop is None:
            summary = f"u_1..u_{n}: {'every' if ok else 'not every'} member is independent of the others"
        else:
            summary = f"u_{drop} {'does not lie' if ok else 'lies'} in the normal closure of the other relators"
        return self._report(
            'wreath', {'n': n, 'drop': drop},
            Verdict.OK if ok else Verdict.DEPENDENT, summary, timings,
            witnesses={'certificates': certificates},
            details={'presentation': format_presentation(family.alphabet, family)},
        )

    def coxeter(self, mu_spec: str, word_text: str) -> ReportDocument:
        """Tits word problem for a shift-invariant Coxeter matrix"""
        timings: Dict[str, float] = {}
        with timed(timings, 'parse_ms'):
            matrix = parse_mu_spec(mu_spec)
            word = parse_cox_word(word_text)
        with timed(timings, 'search_ms'):
            component = parity_certificate(word, matrix)
            verdict = tits_is_trivial(word, matrix, self.node_limit)
        witnesses = {}
        if component is not None:
            witnesses['odd_parity_component'] = sorted(component)
        if verdict is Verdict.UNDETERMINED:
            summary = f"Braid search exceeded {self.node_limit} nodes"
        else:
            summary = f"Word is {verdict.value}"
        return self._report(
            'coxeter', {'mu': matrix.describe(), 'word': format_cox_word(word), 'node_limit': self.node_limit},
            verdict, summary, timings,
            witnesses=witnesses,
            details={'matrix': matrix.describe(), 'reduced_word': format_cox_word(word), 'node_limit': self.node_limit},
        )

    def _commutator_identity(self, p: int, samples: int) -> Tuple[int, int]:
        """[e13(a), e34(b)] = e14(ab) for random a, b in Z[1/p]; (checked, failures)"""
        rng = np.random.default_rng(self.seed)
        failures = 0
        for _ in range(samples):
            a = zinvp_from_fraction(Fraction(int(rng.integers(-99, 100)), p ** int(rng.integers(0, 4))), p)
            b = zinvp_from_fraction(Fraction(int(rng.integers(-99, 100)), p ** int(rng.integers(0, 4))), p)
            lhs = commutator_matrix(elementary(1, 3, a, 4, p), elementary(3, 4, b, 4, p))
            if lhs != elementary(1, 4, a * b, 4, p):
                failures += 1
        return samples, failures

    def abels(self, p: int, precision: int,
              eigenline: Optional[Tuple[str, str, int]] = None) -> ReportDocument:
        """
        Certificates for the Abels construction at the prime p

        The report always carries the Hensel roots of X^2 + p^3 X - 1 with
        their residuals, the non-square discriminant, the commutator identity
        and the sampled eigenline invariance check. With eigenline = (A, B, I)
        the verdict is the membership of (A, B) in E_I.
        """
        timings: Dict[str, float] = {}
        with timed(timings, 'hensel_ms'):
            data = m0_data(p, precision)
        modulus = p ** precision
        roots = []
        for i in (1, 2):
            lam = data.eigenvalue(i).residue
            roots.append({
                'index': i,
                'residue': str(lam),
                'residual_mod_p_k': (lam * lam + p ** 3 * lam - 1) % modulus,
            })
        discriminant = p ** 6 + 4
        with timed(timings, 'checks_ms'):
            checked, failures = self._commutator_identity(p, 20)
            invariant = eigenline_invariance_check(data, seed=self.seed)
        details = {
            'p': p,
            'precision': precision,
            'discriminant': discriminant,
            'discriminant_is_square': math.isqrt(discriminant) ** 2 == discriminant,
            'commutator_identity': {'checked': checked, 'failures': failures},
            'eigenline_invariance': invariant,
        }
        witnesses: Dict[str, Any] = {'roots': roots}
        certified = invariant and not failures and all(r['residual_mod_p_k'] == 0 for r in roots)
        if eigenline is None:
            verdict = Verdict.OK if certified else Verdict.VIOLATION
            summary = f"Hensel roots mod {p}^{precision} certified" if certified else "A certificate failed"
            inputs = {'p': p, 'precision': precision, 'seed': self.seed}
        else:
            a_text, b_text, i = eigenline
            a_value, b_value = parse_rational(a_text), parse_rational(b_text)
            try:
                a = zinvp_from_fraction(a_value, p)
                b = zinvp_from_fraction(b_value, p)
            except ValueError as e:
                raise PreconditionError(str(e)) from None
            with timed(timings, 'membership_ms'):
                verdict = eigenline_membership(a, b, i, data)
                coordinates = eigenline_coordinates(a, b, data)
            if coordinates is not None:
                alpha, beta, m = coordinates
                witnesses['polar_part'] = {'alpha': str(alpha), 'beta': str(beta), 'order': m}
            summary = f"({a}, {b}) in E_{i}: {verdict.value}"
            inputs = {'p': p, 'precision': precision, 'seed': self.seed,
                      'a': str(a), 'b': str(b), 'i': i}
        return self._report('abels', inputs, verdict, summary, timings, witnesses=witnesses, details=details)

    def thompson(self, expression: str) -> ReportDocument:
        """Evaluate a Thompson-group expression"""
        timings: Dict[str, float] = {}
        with timed(timings, 'evaluate_ms'):
            value = evaluate_expression(expression)
        if isinstance(value, bool):
            verdict = Verdict.membership(value)
            kind = 'bool'
        else:
            verdict = Verdict.OK
            kind = type(value).__name__
        rendered = _render_value(value)
        return self._report(
            'thompson', {'expression': ' '.join(expression.split())},
            verdict, f"{kind}: {rendered}", timings,
            witnesses={'value': rendered},
            details={'type': kind},
        )

    def _kernel_table(self, certs: List[FiniteQuotientCert], open_set: Optional[BasicOpenSet],
                      isolate: bool, separator_budget: Optional[int]) -> pd.DataFrame:
        rows = []
        for cert in certs:
            row = KernelRow(kernel=cert.label, group=cert.group_name, index=cert.index)
            if open_set is not None:
                row.in_open_set = in_open_set(MarkedGroup.from_quotient(cert), open_set)
            if isolate:
                separator = isolated_in_sample(cert, certs, separator_budget)
                row.isolated = separator is not None
                if separator is not None:
                    row.separator = _describe_open_set(separator)
            rows.append(row.model_dump(mode='json'))
        return pd.DataFrame(rows, columns=list(KernelRow.model_fields))

    def chabauty_scan(self, rank: int, index: int, open_set_text: Optional[str] = None,
                      isolate: bool = False, separator_budget: Optional[int] = None,
                      min_index: int = 2) -> Tuple[ReportDocument, pd.DataFrame]:
        """
        Enumerate normal subgroups of F_rank of index min_index..index

        Returns:
            (report, table); the verdict is ok without an open set, otherwise
            member when some kernel lies in it (undetermined never arises:
            finite quotients decide every word)
        """
        timings: Dict[str, float] = {}
        open_set = None
        with timed(timings, 'parse_ms'):
            if open_set_text is not None:
                open_set = parse_open_set(open_set_text)
                if open_set.alphabet != default_alphabet(rank):
                    raise PreconditionError(
                        f"Open set generators {open_set.alphabet.names} do not match "
                        f"{default_alphabet(rank).names} for rank {rank}"
                    )
        with timed(timings, 'enumerate_ms'):
            certs = enumerate_normal_lowindex(rank, index, min_index)
        with timed(timings, 'table_ms'):
            table = self._kernel_table(certs, open_set, isolate, separator_budget)
        counts = table.groupby('group').size().to_dict() if len(table) else {}
        if open_set is None:
            verdict = Verdict.OK
            summary = f"{len(table)} normal subgroups of F_{rank} with index {min_index}..{index}"
        else:
            members = int((table['in_open_set'] == Verdict.MEMBER.value).sum())
            verdict = Verdict.membership(members > 0)
            summary = f"{members} of {len(table)} kernels lie in the open set"
        inputs = {'rank': rank, 'index': index, 'min_index': min_index, 'isolate': isolate,
                  'separator_budget': separator_budget,
                  'open_set': _describe_open_set(open_set) if open_set is not None else None}
        report = self._report(
            'chabauty-scan', inputs, verdict, summary, timings,
            details={
                'kernels': len(table),
                'by_group': {str(k): int(v) for k, v in counts.items()},
                'table': table.to_dict('records'),
            },
        )
        return report, table
