"""Command-line front end.

Usage:
    uv run python run.py index POSET [--variant nilpotent|solvable] [--method exact|randomized]
    uv run python run.py rank (POSET | --matrix FILE)
    uv run python run.py matrix POSET [--ordering lex|block] [--nonzero] [--format text|json]
    uv run python run.py reduce POSET [--verify] [--final FILE] [--format text|json|dot]
    uv run python run.py hasse POSET
    uv run python run.py sweep (--n N | --max-n N | --sample COUNT) [--checks a,b] [--output FILE]
    uv run python run.py serve [--host HOST] [--port PORT] [--no-preload]

POSET is a file in the poset text or JSON format, or an inline description
such as "n 3; 1 < 2 < 3".

Exit status: 0 on success, 1 when a formula disagrees with the rank oracle
or a sweep finds a mismatch, 2 on bad input or an exceeded resource bound.
"""
import argparse
import json
import logging
import sys

from app.config import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    METHODS,
    ORDERINGS,
    SWEEP_WORKERS,
    VARIANTS,
)
from app.services.errors import (
    HeightTooLarge,
    OverflowUnrepresentable,
    PosetError,
    ReductionDiverged,
    ResourceBound,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2


def _emit(text: str):
    sys.stdout.write(text if text.endswith('\n') else text + '\n')


def _emit_json(data):
    _emit(json.dumps(data, indent=2))


def _method_line(args) -> str:
    if args.method == 'randomized':
        return f"method: randomized (trials={args.trials}, seed={args.seed})"
    return f"method: exact (seed={args.seed})"


def cmd_index(args) -> int:
    from app.services.index_formulas import index_report
    from app.services.lie_algebra import commutator_matrix
    from app.services.poset_core import load_poset
    from app.services.rank_engine import is_frobenius, matrix_rank

    P = load_poset(args.poset)
    M = commutator_matrix(P, args.variant)
    result = matrix_rank(M, args.method, args.trials, args.seed)
    oracle = M.size - result.rank
    frobenius = is_frobenius(M, result=result)

    try:
        report = index_report(P, args.variant)
    except HeightTooLarge as e:
        report = None
        reason = str(e)

    if report is None:
        verdict = 'ORACLE-ONLY'
    else:
        verdict = 'AGREE' if report.index == oracle else 'DISAGREE'

    if args.format == 'json':
        _emit_json({
            'variant': args.variant,
            'seed': args.seed,
            'rank': result.to_dict(),
            'dimension': M.size,
            'oracle': oracle,
            'frobenius': frobenius,
            'formula': report.to_dict() if report else None,
            'verdict': verdict,
        })
    else:
        lines = [
            f"poset: n={P.n}, |Rel|={P.rel_count}, height={P.height}",
            f"variant: {args.variant}",
            _method_line(args),
        ]
        if report is None:
            lines.append(f"formula: not available ({reason})")
        else:
            lines.append(f"formula ({report.formula_used}): {report.index}")
        lines.append(f"oracle (dim {M.size} - rank {result.rank}): {oracle}")
        lines.append(f"frobenius: {'yes' if frobenius else 'no'}")
        lines.append(f"verdict: {verdict}")
        _emit('\n'.join(lines))
    return EXIT_MISMATCH if verdict == 'DISAGREE' else EXIT_OK


def cmd_rank(args) -> int:
    from app.services.lie_algebra import commutator_matrix, matrix_from_dict
    from app.services.poset_core import load_poset
    from app.services.rank_engine import matrix_rank

    if args.matrix:
        with open(args.matrix, 'r') as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise PosetError(f"{args.matrix}: invalid JSON: {e.msg}") from e
        M = matrix_from_dict(data)
    elif args.poset:
        M = commutator_matrix(load_poset(args.poset), args.variant)
    else:
        raise PosetError('rank needs a POSET argument or --matrix FILE')

    result = matrix_rank(M, args.method, args.trials, args.seed)
    if args.format == 'json':
        _emit_json({'variant': M.variant, 'dimension': M.size, 'seed': args.seed, **result.to_dict()})
    else:
        lines = [
            f"variant: {M.variant}",
            _method_line(args),
            f"rank: {result.rank}",
            f"index: {M.size - result.rank}",
        ]
        if result.failure_bound is not None:
            lines.append(f"failure bound: {result.failure_bound}")
        _emit('\n'.join(lines))
    return EXIT_OK


def cmd_matrix(args) -> int:
    from app.services.lie_algebra import commutator_matrix, matrix_to_dict, render_matrix
    from app.services.poset_core import load_poset

    M = commutator_matrix(load_poset(args.poset), args.variant, args.ordering)
    if args.nonzero:
        M = M.nonzero_view()
    if args.format == 'json':
        _emit_json(matrix_to_dict(M))
    else:
        _emit(render_matrix(M, bold=args.bold))
    return EXIT_OK


def cmd_reduce(args) -> int:
    from app.services.poset_core import load_poset, poset_to_text
    from app.services.reduction import check_step, reduce_to_height2, step_dot_pair, trace_to_dict

    P = load_poset(args.poset)
    final, steps = reduce_to_height2(P)
    checks = [check_step(step, args.method, args.trials, args.seed) for step in steps] if args.verify else []
    failed = any(not c.passed for c in checks)

    if args.final:
        with open(args.final, 'w') as f:
            f.write(poset_to_text(final))
        logger.info("Wrote reduced poset to %s", args.final)

    if args.format == 'dot':
        for step in steps:
            before, after = step_dot_pair(step)
            _emit(before + after)
    elif args.format == 'json':
        data = trace_to_dict(P, final, steps)
        if args.verify:
            data['method'] = args.method
            data['seed'] = args.seed
            data['checks'] = [c.to_dict() for c in checks]
        _emit_json(data)
    else:
        lines = [f"input: n={P.n}, height={P.height}", f"steps: {len(steps)}"]
        for i, step in enumerate(steps, start=1):
            names = ', '.join(f"{name}={label}" for name, label in step.new_elements.items())
            lines.append(
                f"step {i}: chain {list(step.chain)}, case {step.case} at {step.before.name(step.pivot)}, "
                f"new {names}; n={step.after.n}, height={step.after.height}"
            )
            if args.verify:
                c = checks[i - 1]
                lines.append(
                    f"  rank {c.rank_before} -> {c.rank_after}, checks {'PASS' if c.passed else 'FAIL'}"
                )
        lines.append(f"final: n={final.n}, height={final.height}")
        if args.verify:
            lines.append(_method_line(args))
        _emit('\n'.join(lines))
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_hasse(args) -> int:
    from app.services.poset_core import hasse_dot, load_poset

    _emit(hasse_dot(load_poset(args.poset)))
    return EXIT_OK


def _parse_checks(value: str) -> tuple:
    return tuple(c.strip() for c in value.split(',') if c.strip())


def cmd_sweep(args) -> int:
    from app.services.verification import CHECKS, sample_sweep, sweep, sweep_range

    checks = args.checks or CHECKS
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise PosetError(f"unknown checks: {', '.join(unknown)} (choose from {', '.join(CHECKS)})")

    if args.sample is not None:
        report = sample_sweep(args.sample, args.max_size, args.seed, checks, args.method,
                              args.trials, args.workers)
    elif args.n is not None:
        report = sweep(args.n, checks, args.method, args.trials, args.seed, args.exact, args.workers)
    else:
        report = sweep_range(args.max_n, checks, args.method, args.trials, args.seed, args.exact,
                             args.workers)

    if args.output:
        with open(args.output, 'w') as f:
            json.dump(report.to_dict(timing=args.timing), f, indent=2)
            f.write('\n')
        logger.info("Wrote sweep report to %s", args.output)

    if args.format == 'json':
        _emit_json(report.to_dict(timing=args.timing))
    else:
        lines = [
            f"posets: {report.poset_count}",
            _method_line(args),
            'checks: ' + ', '.join(f"{name}={count}" for name, count in sorted(report.checks_run.items())),
            f"mismatches: {len(report.mismatches)}",
        ]
        for item in report.mismatches:
            lines.append(f"  {item['check']}: {item['poset']} expected {item['expected']}, got {item['observed']}")
        if args.timing:
            lines.append(f"elapsed: {report.elapsed:.2f}s")
        lines.append('PASS' if report.passed else 'FAIL')
        _emit('\n'.join(lines))
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_serve(args) -> int:
    from app import create_app
    from app.services.kernel_service import kernel_service

    app = create_app()
    if not args.no_preload:
        logger.info("Loading modular rank kernel...")
        kernel_service.load_kernel()

    logger.warning("Starting server at http://%s:%d", args.host, args.port)
    app.run(host=args.host, port=args.port, debug=args.debug, threaded=True)
    return EXIT_OK


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {value!r}") from None
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {number}")
    return number


def _add_rank_options(parser):
    parser.add_argument('--method', choices=METHODS, default='randomized', help='Rank backend')
    parser.add_argument('--trials', type=_positive_int, default=DEFAULT_TRIALS, help='Randomized rank trials')
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED, help='Seed for randomized rank')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='posetindex', description='Index of Lie poset algebras')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('index', help='Index by formula and by commutator-matrix rank')
    p.add_argument('poset')
    p.add_argument('--variant', choices=VARIANTS, default='nilpotent')
    _add_rank_options(p)
    p.add_argument('--format', choices=('text', 'json'), default='text')
    p.set_defaults(handler=cmd_index)

    p = sub.add_parser('rank', help='Rank of a commutator matrix')
    p.add_argument('poset', nargs='?')
    p.add_argument('--matrix', help='Matrix JSON written by "matrix --format json"')
    p.add_argument('--variant', choices=VARIANTS, default='nilpotent')
    _add_rank_options(p)
    p.add_argument('--format', choices=('text', 'json'), default='text')
    p.set_defaults(handler=cmd_rank)

    p = sub.add_parser('matrix', help='Print the symbolic commutator matrix')
    p.add_argument('poset')
    p.add_argument('--variant', choices=VARIANTS, default='nilpotent')
    p.add_argument('--ordering', choices=ORDERINGS, default='lex')
    p.add_argument('--nonzero', action='store_true', help='Drop zero rows and columns')
    p.add_argument('--bold', action='store_true', help='Bold row and column labels')
    p.add_argument('--format', choices=('text', 'json'), default='text')
    p.set_defaults(handler=cmd_matrix)

    p = sub.add_parser('reduce', help='Reduce to height two with the same matrix rank')
    p.add_argument('poset')
    p.add_argument('--verify', action='store_true', help='Check rank and U/D invariants per step')
    p.add_argument('--final', help='Write the height-two poset to this file in the poset text format')
    _add_rank_options(p)
    p.add_argument('--format', choices=('text', 'json', 'dot'), default='text')
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser('hasse', help='Hasse diagram as DOT')
    p.add_argument('poset')
    p.set_defaults(handler=cmd_hasse)

    p = sub.add_parser('sweep', help='Check formulas against the rank oracle')
    group = p.add_mutually_exclusive_group()
    group.add_argument('--n', type=int, help='Every poset on exactly N elements')
    group.add_argument('--max-n', type=int, default=5, help='Every poset on 1..N elements')
    group.add_argument('--sample', type=_positive_int, help='COUNT random posets instead of enumeration')
    p.add_argument('--max-size', type=_positive_int, default=8, help='Largest random poset for --sample')
    p.add_argument('--checks', type=_parse_checks, help='Comma-separated check names')
    _add_rank_options(p)
    p.add_argument('--exact', action='store_true', help='Compare exact and randomized rank on every poset')
    p.add_argument('--workers', type=_positive_int, default=SWEEP_WORKERS, help='Worker processes')
    p.add_argument('--output', help='Write the JSON report to this file')
    p.add_argument('--timing', action='store_true', help='Include elapsed time in reports')
    p.add_argument('--format', choices=('text', 'json'), default='text')
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser('serve', help='Start the JSON API')
    p.add_argument('--host', default='0.0.0.0', help='Host to bind to')
    p.add_argument('--port', type=int, default=5000, help='Port to bind to')
    p.add_argument('--no-preload', action='store_true', help="Don't compile the kernel at startup")
    p.add_argument('--debug', action='store_true', help='Enable debug mode')
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')

    try:
        return args.handler(args)
    except (PosetError, ResourceBound, OverflowUnrepresentable, ReductionDiverged) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


