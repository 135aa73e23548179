import argparse
import importlib
import logging
import pkgutil
import sys
from pathlib import Path

from .config import load_run_config
from .errors import MoralFrameError, UsageError
from .outputs import VERSION, RunManifest

BASE_DIR = Path(__file__).resolve().parents[1]
LOG_FORMAT = "%(levelname)s %(message)s"
HANDLER_NAME = "moralframe"

logger = logging.getLogger(__name__)

# flag name -> (option strings, argparse keyword arguments); dest is the RunConfig field
COMMON_FLAGS = {
    "embeddings": (("--embeddings",), {"dest": "embedding_path", "help": "word embedding text file"}),
    "lexicon": (("--lexicon",), {"dest": "lexicon_path", "help": "moral seed lexicon"}),
    "sentiment_lexicon": (
        ("--sentiment-lexicon",),
        {"dest": "sentiment_lexicon_path", "help": "token<TAB>valence lexicon"},
    ),
    "sentiment_column": (
        ("--sentiment-column",),
        {"dest": "sentiment_column", "help": "dataset field holding precomputed compound scores"},
    ),
    "data": (("--data",), {"dest": "dataset_path", "help": "campaign JSONL dataset"}),
    "mapping": (("--mapping",), {"dest": "mapping_path", "help": "TOML field mapping"}),
    "out": (("--out",), {"dest": "output_dir", "help": "output directory"}),
    "expected_dim": (("--expected-dim",), {"dest": "expected_dim", "type": int}),
    "pos_threshold": (("--pos-threshold",), {"dest": "sentiment_pos_threshold", "type": float}),
    "neg_threshold": (("--neg-threshold",), {"dest": "sentiment_neg_threshold", "type": float}),
}

COMMAND_FLAGS = {
    "models": (("--models",), {"dest": "model_ids", "help": "comma-separated model ids, e.g. 1,2,3"}),
    "no_interactions": (
        ("--no-interactions",),
        {"dest": "interactions", "action": "store_const", "const": False, "default": None},
    ),
    "frame": (("--frame",), {"dest": "frame", "help": "care, fairness, loyalty or all (default all)"}),
    "category": (("--category",), {"dest": "category_filter", "help": "category filter, or 'all'"}),
    "min_donations": (("--min-donations",), {"dest": "min_donations", "type": int}),
    "max_position": (("--max-position",), {"dest": "max_position", "type": int}),
    "exemplars": (("--exemplars",), {"dest": "exemplar_count", "type": int}),
    "seed": (("--seed",), {"dest": "seed", "type": int}),
    "campaigns": (("--campaigns",), {"dest": "synth_campaigns", "type": int}),
}


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _discover_modules():
    modules_dir = BASE_DIR / "modules"
    if not modules_dir.exists():
        return []
    discovered = []
    for _, module_name, is_pkg in pkgutil.iter_modules([str(modules_dir)]):
        if not is_pkg:
            continue
        discovered.append(module_name)
    return discovered


def configure_logging(verbose: bool = False) -> None:
    root = logging.getLogger()
    for handler in [h for h in root.handlers if getattr(h, "name", None) == HANDLER_NAME]:
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(HANDLER_NAME)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


class CommandLineApp:
    def __init__(self, title: str):
        self.title = title
        self.commands = {}

    def include_router(self, router) -> None:
        for command in router.commands:
            if command.name in self.commands:
                raise RuntimeError(f"duplicate command: {command.name}")
            self.commands[command.name] = command

    def build_parser(self) -> ArgumentParser:
        parser = ArgumentParser(prog="moralframe", description=self.title)
        parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
        subparsers = parser.add_subparsers(dest="command", required=True)
        for name in sorted(self.commands):
            command = self.commands[name]
            sub = subparsers.add_parser(name, help=command.help, description=command.help)
            sub.add_argument("--config", help="TOML settings file")
            sub.add_argument("-v", "--verbose", action="store_true")
            for flag in COMMON_FLAGS:
                options, kwargs = COMMON_FLAGS[flag]
                sub.add_argument(*options, **kwargs)
            for flag in command.flags:
                options, kwargs = COMMAND_FLAGS[flag]
                sub.add_argument(*options, **kwargs)
        return parser

    def run(self, argv=None) -> int:
        try:
            args = self.build_parser().parse_args(argv)
        except UsageError as exc:
            print(f"moralframe: {exc}", file=sys.stderr)
            return exc.exit_code
        configure_logging(args.verbose)
        command = self.commands[args.command]
        overrides = {
            key: value
            for key, value in vars(args).items()
            if key not in ("command", "config", "verbose") and value is not None
        }
        try:
            config = load_run_config(overrides, args.config)
            config.require_paths(*command.requires)
            if command.requires and config.mapping_path:
                config.require_paths("mapping_path")
            manifest = RunManifest(command.name, config.model_dump(mode="json"))
            command.handler(config, manifest)
            manifest.write(config.output_dir)
        except MoralFrameError as exc:
            logger.error("[%s] %s", command.name, exc)
            return exc.exit_code
        except Exception:
            if args.verbose:
                raise
            logger.exception("[%s] unexpected failure", command.name)
            return MoralFrameError.exit_code
        return 0


def create_app() -> CommandLineApp:
    app = CommandLineApp(title="Moral framing analysis of fundraising appeals")

    for module_name in _discover_modules():
        try:
            mod = importlib.import_module(f"modules.{module_name}.commands")
            if hasattr(mod, "router"):
                app.include_router(mod.router)
                logger.debug("Loaded module: %s", module_name)
        except ImportError as exc:
            logger.warning("Failed to load module %s: %s", module_name, exc)

    return app
