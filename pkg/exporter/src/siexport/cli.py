"""Command-line entry point for the exporter."""
import argparse
import json
import sys

from .export import ExportSpec, ExportError, export, hubbard_dimer_document, write_document
from pathlib import Path


def build_parser():
    parser = argparse.ArgumentParser(prog="siexport", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("export", help="run periodic HF and write Hamiltonian files")
    p.add_argument("--out", required=True)
    p.add_argument("--lattice-constant", type=float, default=5.43, help="Angstrom")
    p.add_argument("--k-labels", nargs="+", default=["L", "Gamma", "X"])
    p.add_argument("--ke-cutoff", type=float, default=60.0, help="Hartree")

    p = sub.add_parser("hubbard", help="write the backend-bypass Hubbard dimer fixture")
    p.add_argument("--out", required=True)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--u", type=float, default=4.0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "export":
            spec = ExportSpec(
                lattice_constant_angstrom=args.lattice_constant,
                k_labels=tuple(args.k_labels),
                ke_cutoff=args.ke_cutoff,
                output_dir=args.out,
            )
            manifest = export(spec)
            print(json.dumps({k: v["hf_energy"] for k, v in manifest["k_points"].items()}, indent=1))
        else:
            write_document(hubbard_dimer_document(args.t, args.u), Path(args.out))
    except ExportError as exc:
        print(f"export error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
