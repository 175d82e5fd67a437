# ================================================================================================
# 🖥️ FUNCINT CLI - Punto de entrada
# ================================================================================================
#   funcint run --config <path> [--output <path>] [--seed-override <u64>]
#   funcint mesh-info <path.msh | interval.json>
#   funcint schema
#
# Exit status: 0 ok, 1 configuration/validation/parse error, 2 numerical failure.

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

import structlog
from pydantic import ValidationError

from .. import __version__
from ..core.config import get_settings
from ..core.logging import configure_logging
from ..domain.exceptions.funcint_exceptions import FuncIntException, NumericalException
from ..io.msh_reader import read_msh
from ..io.writers import format_mesh_info
from .config_schema import IntervalMeshConfig, run_config_schema
from .runner import interval_mesh_from_config, run

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_NUMERICAL_ERROR = 2


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="funcint",
        description="Functional integrals by finite-element reduction.",
    )
    parser.add_argument("--version", action="version", version=f"funcint {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="Execute a JSON run configuration")
    run_p.add_argument("--config", required=True, type=Path, help="Run configuration (JSON)")
    run_p.add_argument("--output", type=Path, default=None, help="Override output.path")
    run_p.add_argument("--seed-override", type=_u64, default=None, help="Override chain.seed")

    info_p = sub.add_parser("mesh-info", help="Summarize an MSH 2.2 file or a JSON interval mesh")
    info_p.add_argument("path", type=Path)

    sub.add_parser("schema", help="Print the run configuration JSON schema")
    return parser


def _format_validation_error(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"])
        parts.append(f"{loc}: {err['msg']}")
    return "invalid configuration: " + "; ".join(parts)


def _error(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _cmd_run(args: argparse.Namespace) -> int:
    model = "?"
    try:
        model = _peek_model(args.config)
        result = run(args.config, output=args.output, seed_override=args.seed_override)
    except ValidationError as exc:
        _error(_format_validation_error(exc))
        return EXIT_CONFIG_ERROR
    except NumericalException as exc:
        logger.error("numerical_failure", model=model, error_code=exc.error_code)
        _error(f"model={model}: {exc.message}")
        return EXIT_NUMERICAL_ERROR
    except FuncIntException as exc:
        _error(exc.message)
        return EXIT_CONFIG_ERROR
    except (OSError, ValueError) as exc:
        _error(str(exc))
        return EXIT_CONFIG_ERROR
    print(result.summary())
    return EXIT_OK


def _peek_model(path: Path) -> str:
    """Model name for diagnostics, read before full validation."""
    try:
        return str(json.loads(Path(path).read_text(encoding="utf-8")).get("model", "?"))
    except (OSError, ValueError, AttributeError):
        return "?"


def _cmd_mesh_info(args: argparse.Namespace) -> int:
    path: Path = args.path
    try:
        if path.suffix.lower() == ".json":
            cfg = IntervalMeshConfig.model_validate_json(path.read_bytes())
            mesh = interval_mesh_from_config(cfg)
        else:
            mesh = read_msh(path)
    except ValidationError as exc:
        _error(_format_validation_error(exc))
        return EXIT_CONFIG_ERROR
    except FuncIntException as exc:
        _error(exc.message)
        return EXIT_CONFIG_ERROR
    except OSError as exc:
        _error(str(exc))
        return EXIT_CONFIG_ERROR
    sys.stdout.write(format_mesh_info(mesh, get_settings().csv_float_format))
    return EXIT_OK


def _cmd_schema(args: argparse.Namespace) -> int:
    sys.stdout.write(run_config_schema())
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(get_settings())
    handlers = {"run": _cmd_run, "mesh-info": _cmd_mesh_info, "schema": _cmd_schema}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
