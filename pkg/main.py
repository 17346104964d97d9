import sys
import asyncio
import logging
import argparse
import importlib
import traceback
from concurrent.futures import ProcessPoolExecutor

from angmom.config import load_settings
from angmom.errors import AngmomError, ConfigurationError, EXIT_BAD_INPUT, EXIT_OK

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s %(levelname)s:%(message)s')


class CommandHub:
    """
    Argument parser plus the registry of command cogs. Each cog adds its own
    sub-commands and handles them as coroutines returning an exit code.
    """

    def __init__(self, settings):
        self.settings = settings
        self.cogs = {}
        self.parser = argparse.ArgumentParser(
            prog='angmom',
            description='Exact angular-momentum coupling coefficients.',
        )
        self.parser.add_argument('--env-file', default=None, help='optional .env file read before validation')
        self.parser.add_argument('--workers', type=int, default=None, help='worker processes for sweeps')
        self.parser.add_argument('--phase-convention', choices=('calibrated', 'printed'), default=None)
        self.parser.add_argument('--phi-reading', choices=('uniform', 'literal'), default=None)
        self.parser.add_argument('--max-gf-degree', type=int, default=None)
        self.subparsers = self.parser.add_subparsers(dest='command', required=True)

    async def load_extension(self, name):
        module = importlib.import_module(name)
        await module.setup(self)

    async def add_cog(self, cog):
        self.cogs[type(cog).__name__] = cog
        cog.register(self.subparsers)

    def get_cog(self, name):
        return self.cogs.get(name)

    def apply_overrides(self, args):
        """CLI flags win over the environment."""
        self.settings = self.settings.override(
            workers=args.workers,
            phase_convention=args.phase_convention,
            phi_reading=args.phi_reading,
            max_gf_degree=args.max_gf_degree,
        )
        if self.settings.workers < 1:
            raise ConfigurationError(f"--workers must be at least 1, got {self.settings.workers}")

    async def run_sweep(self, func, chunks):
        """
        Apply `func` to every chunk, in worker processes when more than one
        worker is configured; results come back in chunk order.
        """
        if self.settings.workers <= 1 or len(chunks) <= 1:
            return [func(chunk) for chunk in chunks]
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=self.settings.workers) as pool:
            futures = [loop.run_in_executor(pool, func, chunk) for chunk in chunks]
            return await asyncio.gather(*futures)

    def chunked(self, items, size=None):
        items = list(items)
        if not items:
            return []
        if size is None:
            size = max(1, -(-len(items) // (4 * self.settings.workers)))
        return [items[i:i + size] for i in range(0, len(items), size)]


async def load_cogs(hub):
    """
    Load the command cogs in the correct order.
    """
    cogs = [
        'cogs.symbols_cog',  # cg, threej, sixj, ninej, passage
        'cogs.table_cog',    # CSV / JSON sweeps
        'cogs.gf_cog',       # generating-function dumps
        'cogs.verify_cog',   # invariant suites and the reconciliation table
    ]
    for cog in cogs:
        try:
            await hub.load_extension(cog)
            logging.info(f"Successfully loaded cog: {cog}")
        except Exception as e:
            logging.error(f"Failed to load cog {cog}: {e}")
            logging.error(traceback.format_exc())


def _env_file(argv):
    for i, arg in enumerate(argv):
        if arg == '--env-file' and i + 1 < len(argv):
            return argv[i + 1]
        if arg.startswith('--env-file='):
            return arg.split('=', 1)[1]
    return None


async def run_command(argv) -> int:
    """Parse argv, dispatch to the owning cog and return the exit code."""
    argv = list(argv)
    try:
        settings = load_settings(_env_file(argv))
    except AngmomError as e:
        logging.error(f"Invalid configuration: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    logging.getLogger().setLevel(settings.log_level)

    hub = CommandHub(settings)
    await load_cogs(hub)
    try:
        args = hub.parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_BAD_INPUT
    try:
        hub.apply_overrides(args)
        return await args.handler(args)
    except AngmomError as e:
        logging.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


def main(argv=None) -> int:
    return asyncio.run(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    sys.exit(main())
