# vertex_net.py
#
# Exact correlation functions of the combinatorial eight-vertex model over F2:
# analyze vertex matrices, build the self-similarity spin transform, compute
# k-spin probabilities on face 1 and run the verification suites.
#
# Usage:
#   python vertex_net.py analyze 011001101
#   python vertex_net.py transform 011001101 -n 2
#   python vertex_net.py correlate 011001101 -n 2 --edges 0,0 2,0 0,2 2,2 --oracle --predictor
#   python vertex_net.py verify theorem -n 2
#   python vertex_net.py scan TwelveClass -n 2

import argparse
import logging
import sys

from tabulate import tabulate

from utils.block import EdgeAddress
from utils.config import add_cli_config, get_acceptance_cfg, get_cfg
from utils.correlations import CorrelationQuery, k_spin_probability, theorem_predictor
from utils.errors import CapExceededError, EncodingError, VertexError
from utils.evaluation import SUITES, run_suite, scan_class
from utils.gf2 import Gf2Matrix
from utils.logger import setup_logger
from utils.model import (MatrixClass, b_matrix, build_model, classify, decode_matrix, spectral_data,
                         vertex_distribution)
from utils.oracle import oracle_probability, permitted_space
from utils.reporting import dumps, format_probability, frame_table, matrix_text, reports_table
from utils.transform import address_grid, address_grid_text, build_transform, class_counts, closed_form_counts

logger = logging.getLogger("vertex_net")

G_PAIRS = [(1, 3), (1, 2), (2, 3), (2, 1), (3, 2), (3, 1)]
# G and B are printed in full only up to this level
PRINT_MATRIX_MAX_N = 2


def parse_edge(text):
    """'b2,b3' with decimal or 0b-prefixed binary coordinates."""
    parts = text.split(",")
    if len(parts) != 2:
        raise EncodingError(f"edge {text!r} is not of the form b2,b3")
    try:
        return int(parts[0].strip(), 0), int(parts[1].strip(), 0)
    except ValueError as err:
        raise EncodingError(f"edge {text!r} has a non-integer coordinate") from err


def get_parser():
    parser = argparse.ArgumentParser(description="exact correlation engine for the eight-vertex model over F2")
    # shared flags
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['json', 'text'], default=None,
                        help='output format (default from configs/defaults.yaml)')
    common.add_argument('--jobs', type=int, default=None, help='worker processes for scans')
    common.add_argument('--max-n-override', type=int, default=None, help='raise the level caps to this value')
    common.add_argument('--config', default=None, help='extra yaml merged over configs/defaults.yaml')
    common.add_argument('--verbose', action='store_true', help='debug logging')
    common.add_argument('--progress', action='store_true', help='show progress bars')

    verbs = parser.add_subparsers(dest='verb', required=True)

    analyze = verbs.add_parser('analyze', parents=[common], help='minors, G/B matrices, eigenvectors, Q values, class')
    analyze.add_argument('matrix', help='9-character row-major encoding, e.g. 011001101')

    transform = verbs.add_parser('transform', parents=[common], help='the matrices G and B and the address classes')
    transform.add_argument('matrix')
    transform.add_argument('-n', type=int, default=1, help='level')

    correlate = verbs.add_parser('correlate', parents=[common], help='probability that the listed spins are all 0')
    correlate.add_argument('matrix')
    correlate.add_argument('-n', type=int, default=1, help='level')
    correlate.add_argument('--edges', nargs='+', required=True, help='face-1 edges as b2,b3 pairs')
    correlate.add_argument('--oracle', action='store_true', help='also count permitted configurations')
    correlate.add_argument('--predictor', action='store_true', help='also give the closed-form prediction')

    verify = verbs.add_parser('verify', parents=[common], help='run verification suites')
    verify.add_argument('suite', nargs='+', help=f"one or more of {sorted(SUITES)}, or 'all'")
    verify.add_argument('-n', type=int, nargs='+', default=None, help='levels for the theorem, spins and lemmas suites')
    verify.add_argument('--acceptance', default=None, help='extra yaml merged over configs/acceptance.yaml')
    verify.add_argument('--sample-size', type=int, default=None, help='non-square quadruples sampled at n >= 3')
    verify.add_argument('--seed', type=int, default=None)

    scan = verbs.add_parser('scan', parents=[common], help='correlation tables across a matrix class')
    scan.add_argument('matrix_class', metavar='class', help=f"one of {[m.value for m in MatrixClass]}")
    scan.add_argument('-n', type=int, default=1, help='level')

    return parser


def setup(args):
    cfg = get_cfg(args.config)
    cfg = add_cli_config(cfg, args)
    cfg.progress = bool(args.progress)
    setup_logger(level=logging.DEBUG if args.verbose else logging.INFO)
    logger.debug(f"Command Line Args: {args}")
    return cfg


def cmd_analyze(args, cfg):
    a = decode_matrix(args.matrix)
    model = build_model(a)
    matrix_class = classify(a)
    payload = {
        "matrix": model.encoding,
        "class": matrix_class.value,
        "valid": model.valid,
        "delta": model.delta,
        "minors": [list(row) for row in model.minors],
        "g": {f"{i}{j}": model.g(i, j).to_lists() for i, j in G_PAIRS},
        "b": None,
        "eigenvectors": None,
        "Q": None,
        "Q_t": None,
        "permitted_dim": None,
    }
    lines = [f"matrix {model.encoding}   class {matrix_class.value}   delta {model.delta}",
             "minors m_jk:", matrix_text(Gf2Matrix.from_lists(payload["minors"]))]
    for i, j in G_PAIRS:
        lines += [f"G{i}{j}:", matrix_text(model.g(i, j))]
    if model.valid:
        spectra = spectral_data(model)
        dist, dist_t = vertex_distribution(model), vertex_distribution(model, True)
        payload["b"] = {f"{i}{j}": b_matrix(model, i, j).to_lists() for i, j in G_PAIRS}
        payload["eigenvectors"] = {"A": [v.to_list() for v in spectra.e_space.basis],
                                   "AT": [v.to_list() for v in spectra.e_space_t.basis]}
        payload["Q"] = [dist.Q0, dist.Q1]
        payload["Q_t"] = [dist_t.Q0, dist_t.Q1]
        payload["permitted_dim"] = {str(n): permitted_space(model, n).dim for n in (0, 1)}
        lines += ["B13:", matrix_text(model.b13), "B12:", matrix_text(model.b12),
                  "eigenvectors of A:   " + " ".join(str(v) for v in spectra.e_space.basis),
                  "eigenvectors of A^T: " + " ".join(str(v) for v in spectra.e_space_t.basis),
                  f"Q  = ({dist.Q0}, {dist.Q1})",
                  f"Q' = ({dist_t.Q0}, {dist_t.Q1})",
                  f"state sum dimension: n=0 {payload['permitted_dim']['0']}, n=1 {payload['permitted_dim']['1']}"]
    else:
        lines.append("delta = 0: general position fails, no spin transform")
    return payload, "\n".join(lines), True


def cmd_transform(args, cfg):
    model = build_model(decode_matrix(args.matrix)).require_valid()
    if args.n > cfg.engine.max_n:
        raise CapExceededError(f"level {args.n} exceeds engine.max_n = {cfg.engine.max_n}")
    t = build_transform(model, args.n)
    counted, formula = class_counts(args.n), closed_form_counts(args.n)
    show = args.n <= PRINT_MATRIX_MAX_N
    payload = {
        "matrix": model.encoding,
        "n": args.n,
        "g": t.g.to_lists() if show else None,
        "b": t.b.to_lists() if show else None,
        "address_grid": [[c.value for c in row] for row in address_grid(args.n)],
        "class_counts": list(counted),
        "closed_form_counts": list(formula),
        "stepwise_verified": t.stepwise_verified,
    }
    lines = [f"matrix {model.encoding}   n = {args.n}   G is {t.g.rows}x{t.g.cols}"]
    if show:
        lines += ["G:", matrix_text(t.g), "B:", matrix_text(t.b)]
    lines += ["ghost addresses (rows alpha, columns beta; '#' belongs to A^T):", address_grid_text(args.n),
              f"A / A^T counts: {counted[0]} / {counted[1]} (formula {formula[0]} / {formula[1]})",
              f"stepwise construction agrees: {t.stepwise_verified}"]
    return payload, "\n".join(lines), counted == formula


def cmd_correlate(args, cfg):
    model = build_model(decode_matrix(args.matrix)).require_valid()
    if args.n > cfg.engine.max_n:
        raise CapExceededError(f"level {args.n} exceeds engine.max_n = {cfg.engine.max_n}")
    q = CorrelationQuery(args.n, tuple(EdgeAddress(1, parse_edge(e)) for e in args.edges))
    engine = k_spin_probability(model, q)
    payload = {"matrix": model.encoding, "n": q.n, "edges": q.pairs, "k": q.k,
               "engine": engine, "in_verified_scope": q.in_verified_scope}
    row = [model.encoding, q.n, " ".join(f"({b2},{b3})" for b2, b3 in q.pairs),
           format_probability(engine, cfg.output.decimals)]
    headers = ["matrix", "n", "edges", "engine"]
    ok = True
    if args.oracle:
        counted = oracle_probability(model, q, cfg.engine.max_n)
        payload["oracle"], payload["match"] = counted, counted == engine
        row += [format_probability(counted, cfg.output.decimals), counted == engine]
        headers += ["oracle", "match"]
        ok = counted == engine
    if args.predictor:
        predicted = theorem_predictor(q, classify(model.a)) if q.in_verified_scope else None
        payload["predictor"] = predicted
        row.append(format_probability(predicted, cfg.output.decimals) if predicted else "-")
        headers.append("predictor")
    text = tabulate([row], headers=headers, tablefmt="simple")
    if not q.in_verified_scope:
        text += f"\n{q.k} spins: outside verified scope"
    return payload, text, ok


def _suite_names(args):
    names = sorted(SUITES) if "all" in args.suite else args.suite
    return list(dict.fromkeys(names))


def _apply_levels(acceptance, levels):
    if not levels:
        return acceptance
    acceptance.theorem.exhaustive_levels = [n for n in levels if n <= 2]
    acceptance.theorem.sampled_levels = [n for n in levels if n > 2]
    acceptance.spins.levels = list(levels)
    acceptance.lemmas.lemma_m_levels = list(levels)
    acceptance.lemmas.lemma_k_levels = list(levels)
    acceptance.lemmas.witness_levels = list(levels)
    return acceptance


def cmd_verify(args, cfg):
    acceptance = _apply_levels(get_acceptance_cfg(args.acceptance), args.n)
    if args.sample_size is not None:
        acceptance.theorem.sample_size = args.sample_size
    if args.seed is not None:
        acceptance.theorem.seed = args.seed
    reports = []
    for name in _suite_names(args):
        reports += run_suite(name, cfg, acceptance)
    ok = all(r.passed or r.exploratory for r in reports)
    payload = {"suites": _suite_names(args), "passed": ok, "reports": [r.to_dict(cfg.output.decimals) for r in reports]}
    text = reports_table(reports) + f"\n\n{'all checks passed' if ok else 'SOME CHECKS FAILED'}"
    return payload, text, ok


def cmd_scan(args, cfg):
    matrix_class = MatrixClass.from_tag(args.matrix_class)
    df, report = scan_class(matrix_class, args.n, cfg)
    payload = {"class": matrix_class.value, "n": args.n, "rows": df.to_dict(orient="records"),
               "report": report.to_dict(cfg.output.decimals)}
    text = frame_table(df) + "\n\n" + reports_table([report])
    if report.exploratory:
        text += "\nexploratory: outside the verified scope"
    return payload, text, report.passed or report.exploratory


COMMANDS = {
    "analyze": cmd_analyze,
    "transform": cmd_transform,
    "correlate": cmd_correlate,
    "verify": cmd_verify,
    "scan": cmd_scan,
}


def main(args):
    try:
        cfg = setup(args)
        payload, text, ok = COMMANDS[args.verb](args, cfg)
    except VertexError as err:
        logger.error(f"{type(err).__name__}: {err}")
        return 2
    if cfg.output.format == "json":
        print(dumps(payload, cfg.output.decimals))
    else:
        print(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main(get_parser().parse_args()))
