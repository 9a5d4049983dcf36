"""
Command Line Interface for bunchkit
"""

import argparse
import json
import sys
from typing import Any, List, Optional

from . import __version__
from .exceptions import BunchkitError, InputError
from .explorer import MAX_STATES, SearchBudget
from .frames import STRONG, UDMF
from .heap import VARIANTS
from .syntax import Logic, LogicName, ModalClass, SigmaAxiom
from .workbench import FUZZERS, Outcome, Workbench, load_json

EXAMPLES = """
Examples:
  %(prog)s parse --logic BBI "p * (q -* r)"
  %(prog)s sat --logic BBI --frame f.json --val v.json --state a --formula "p * p"
  %(prog)s entails --frame f.json --seq "p |- p * p"
  %(prog)s countermodel --logic BBI --seq "p |- p * p" --budget 2
  %(prog)s roundtrip --algebra a.json --out json
  %(prog)s heap-sat --universe u.json --store s.json --heap h.json --formula "x |-> 5"
  %(prog)s fuzz --logic CKBI --kind soundness --trials 500 --seed 7
  %(prog)s samples --dir samples/

Exit status is 0 when a check succeeds, 1 for a semantic negative (a
failed check, a countermodel found) and 2 for unusable input.
"""


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--logic', help=f"logic name, one of {', '.join(n.value for n in LogicName)}")
    common.add_argument('--sigma', action='append', default=[], choices=[a.value for a in SigmaAxiom],
                        help='Bi(B)BI correspondence axiom to assume (repeatable)')
    common.add_argument('--modal', default=ModalClass.NONE.value, choices=[m.value for m in ModalClass],
                        help='modal class of SML')
    common.add_argument('--mode', default=STRONG, choices=[STRONG, UDMF], help='satisfaction clauses')
    common.add_argument('--variant', default="bi", choices=list(VARIANTS), help='pointer logic variant')
    common.add_argument('--budget', type=int, default=2, help=f'largest frame size searched (1-{MAX_STATES})')
    common.add_argument('--seed', type=int, default=0, help='random seed for fuzzing')
    common.add_argument('--jobs', type=int, default=1, help='worker processes for frame enumeration')
    common.add_argument('--time-limit', type=float, default=60.0, help='seconds before a search gives up')
    common.add_argument('--max-valuations', type=int, default=100_000, help='valuations tried by countermodel search')
    common.add_argument('--out', default='text', choices=['text', 'json'], help='output format')
    common.add_argument('--verbose', '-v', action='store_true', help='Show detailed output')
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bunchkit",
        description="Semantics workbench for the bunched logics: frames, algebras, duality and heaps",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EXAMPLES,
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    common = _common()
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        return commands.add_parser(name, parents=[common], help=help_text, description=help_text)

    sub = command('parse', 'Parse and pretty-print a formula or sequent')
    sub.add_argument('text', help='formula, or sequent with |-')

    command('rules', "List a logic's Hilbert rules")

    sub = command('check-proof', 'Check a Hilbert proof document')
    sub.add_argument('--proof', required=True, help='proof JSON')

    sub = command('check-frame', 'Check a frame against its kind')
    sub.add_argument('--frame', required=True, help='frame JSON')

    sub = command('check-algebra', 'Check an algebra against its kind')
    sub.add_argument('--algebra', required=True, help='algebra JSON')

    sub = command('sat', 'Decide whether a state satisfies a formula')
    sub.add_argument('--frame', required=True)
    sub.add_argument('--val', help='valuation JSON')
    sub.add_argument('--state', required=True)
    sub.add_argument('--formula', required=True)

    sub = command('entails', 'Check a sequent in a model, or in every model on a frame')
    sub.add_argument('--frame', required=True)
    sub.add_argument('--val', help='valuation JSON; omit to quantify over all valuations')
    sub.add_argument('--seq', required=True, help='sequent "phi |- psi"')

    sub = command('com', 'Complex algebra of a frame')
    sub.add_argument('--frame', required=True)

    sub = command('pr', 'Prime filter frame of an algebra')
    sub.add_argument('--algebra', required=True)

    sub = command('roundtrip', 'Embedding check of an algebra, or eta check of a frame')
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument('--algebra')
    group.add_argument('--frame')

    sub = command('morphism', 'Check a morphism and its inverse image')
    sub.add_argument('--map', required=True, help='JSON object from source states to target states')
    sub.add_argument('--source', required=True)
    sub.add_argument('--target', required=True)

    sub = command('correspondence', 'Check one correspondence row on a Bi(B)BI frame')
    sub.add_argument('--frame', required=True)
    sub.add_argument('--row', required=True, choices=[a.value for a in SigmaAxiom])

    for name, help_text in (('heap-sat', 'Pointer-logic satisfaction at a store and heap'),
                            ('indexed-sat', 'Satisfaction on the store frames')):
        sub = command(name, help_text)
        sub.add_argument('--universe', required=True, help='universe JSON')
        sub.add_argument('--store', required=True, help='store JSON')
        sub.add_argument('--heap', required=True, help='heap JSON')
        sub.add_argument('--formula', required=True)

    sub = command('sep-props', 'Separation properties of a frame or of a heap frame')
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument('--frame')
    group.add_argument('--universe')

    sub = command('countermodel', 'Search for a smallest countermodel to a sequent')
    sub.add_argument('--seq', required=True)

    sub = command('fuzz', 'Run a fuzzer or sweep')
    sub.add_argument('--kind', default='soundness', choices=list(FUZZERS))
    sub.add_argument('--trials', type=int, default=100)

    sub = command('samples', 'Print or write the sample library')
    sub.add_argument('--dir', help='directory receiving one JSON file per sample')
    return parser


def _logic(args, required: bool = False) -> Optional[Logic]:
    if not args.logic:
        if required:
            raise InputError(f"--logic is required for {args.command}")
        if args.sigma or args.modal != ModalClass.NONE.value:
            raise InputError("--sigma and --modal need --logic")
        return None
    return Logic.parse(args.logic, args.sigma, args.modal)


def _budget(args) -> SearchBudget:
    return SearchBudget(
        logic=_logic(args, required=True),
        max_states=args.budget,
        max_valuations=args.max_valuations,
        time_limit=args.time_limit,
        jobs=args.jobs,
        seed=args.seed,
        mode=args.mode,
    )


def dispatch(bench: Workbench, args) -> Outcome:
    """Run the selected command on the workbench"""
    cmd = args.command
    if cmd == 'parse':
        return bench.parse(args.text, _logic(args) or Logic(LogicName.BBI))
    if cmd == 'rules':
        return bench.rules(_logic(args, required=True))
    if cmd == 'check-proof':
        return bench.check_proof(args.proof, _logic(args))
    if cmd == 'check-frame':
        return bench.check_frame(bench.load_frame(args.frame, _logic(args)))
    if cmd == 'check-algebra':
        return bench.check_algebra(bench.load_algebra(args.algebra, _logic(args)))
    if cmd == 'sat':
        frame = bench.load_frame(args.frame, _logic(args))
        return bench.sat(frame, bench.load_valuation(args.val), args.state, args.formula, args.mode)
    if cmd == 'entails':
        frame = bench.load_frame(args.frame, _logic(args))
        valuation = bench.load_valuation(args.val) if args.val else None
        return bench.entails(frame, valuation, args.seq, args.mode)
    if cmd == 'com':
        return bench.com(bench.load_frame(args.frame, _logic(args)))
    if cmd == 'pr':
        return bench.pr(bench.load_algebra(args.algebra, _logic(args)))
    if cmd == 'roundtrip':
        if args.algebra:
            return bench.roundtrip(bench.load_algebra(args.algebra, _logic(args)))
        return bench.roundtrip(bench.load_frame(args.frame, _logic(args)))
    if cmd == 'morphism':
        doc = load_json(args.map)
        if not isinstance(doc, dict):
            raise InputError(f"{args.map} does not hold a state map")
        mapping = {str(k): str(v) for k, v in doc.get("map", doc).items()}
        logic = _logic(args)
        return bench.morphism(mapping, bench.load_frame(args.source, logic), bench.load_frame(args.target, logic))
    if cmd == 'correspondence':
        return bench.correspondence(bench.load_frame(args.frame, _logic(args)), args.row)
    if cmd in ('heap-sat', 'indexed-sat'):
        universe = bench.load_universe(args.universe)
        store, heap = bench.load_store(args.store), bench.load_heap(args.heap)
        run = bench.heap_sat if cmd == 'heap-sat' else bench.indexed_sat
        return run(universe, store, heap, args.formula, args.variant)
    if cmd == 'sep-props':
        if args.universe:
            return bench.sep_props(bench.load_universe(args.universe), args.variant)
        return bench.sep_props(bench.load_frame(args.frame, _logic(args)))
    if cmd == 'countermodel':
        return bench.countermodel(args.seq, _budget(args))
    if cmd == 'fuzz':
        return bench.fuzz(args.kind, args.trials, _budget(args))
    if cmd == 'samples':
        return bench.samples(args.dir)
    raise InputError(f"unknown command '{cmd}'")


def render_text(command: str, outcome: Outcome) -> str:
    """Readable lines for a payload; a bare verdict for the satisfaction commands"""
    payload = outcome.payload
    if command in ('sat', 'heap-sat', 'indexed-sat'):
        return "true" if payload["satisfied"] else "false"
    lines: List[str] = []
    _render(payload, 0, lines)
    return "\n".join(lines)


def _render(value: Any, indent: int, lines: List[str]) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                _render(item, indent + 1, lines)
            else:
                lines.append(f"{pad}{key}: {_scalar(item)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict):
                lines.append(f"{pad}-")
                _render(item, indent + 1, lines)
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")


def _scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "-"
    if isinstance(value, (dict, list)):
        return json.dumps(value, ensure_ascii=False)
    return str(value)


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)
    bench = None

    try:
        bench = Workbench(verbose=args.verbose)
        outcome = dispatch(bench, args)

        if args.out == 'json':
            print(json.dumps(outcome.payload, indent=2, ensure_ascii=False))
        else:
            print(render_text(args.command, outcome))

        if args.verbose:
            bench.print_summary()
        return 0 if outcome.ok else 1

    except BunchkitError as e:
        if bench is not None:
            bench.record_error(e)
        print(f"❌ Error: {e}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as e:
        print(f"❌ Cannot read input: {e}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("\n⚠️  Operation interrupted by user.", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
