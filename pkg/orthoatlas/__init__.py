"""
Workspace atlas of 3R orthogonal manipulators with null parameters.

The CLI is assembled by ``create_cli``; each command lives in ``atlas.views``.
"""

import click

from .atlas import atlas_commands
from .config.config import config_dict
from .utils import configure_logging
from .utils.errors import (
    AtlasError,
    InvalidParameters,
    NoSignatureMatch,
    OutOfFamily,
    OutputError,
    VerificationFailed,
)


class AtlasGroup(click.Group):
    """A click group that turns AtlasError subclasses into messages and exit codes."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.error_handlers = {}

    def errorhandler(self, exception_type):
        def register(handler):
            self.error_handlers[exception_type] = handler
            return handler
        return register

    def _handler_for(self, error):
        for klass in type(error).__mro__:
            if klass in self.error_handlers:
                return self.error_handlers[klass]
        return None

    def parse_args(self, ctx, args):
        try:
            return super().parse_args(ctx, args)
        except click.UsageError as error:
            error.exit_code = InvalidParameters.exit_code
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as error:
            # usage errors exit like invalid parameters
            error.exit_code = InvalidParameters.exit_code
            raise
        except AtlasError as error:
            handler = self._handler_for(error)
            message, code = handler(error) if handler else (str(error), error.exit_code)
            click.secho(f"error: {message}", fg="red", err=True)
            ctx.exit(code)


def create_cli(config=config_dict["dev"]):
    @click.group(cls=AtlasGroup, help="Classify 3R orthogonal manipulators by workspace topology.")
    @click.version_option(config.VERSION, prog_name="atlas")
    @click.option("--verbose", "-v", is_flag=True, help="log progress at DEBUG level")
    @click.pass_context
    def cli(ctx, verbose):
        configure_logging("DEBUG" if verbose else config.LOG_LEVEL)
        ctx.obj = config

    # adding commands to the CLI
    for command in atlas_commands:
        cli.add_command(command)

    # error handlers
    @cli.errorhandler(OutOfFamily)
    def out_of_family(error):
        return error.message, OutOfFamily.exit_code

    @cli.errorhandler(OutputError)
    def output_error(error):
        return error.message, OutputError.exit_code

    @cli.errorhandler(VerificationFailed)
    def verification_failed(error):
        return error.message, VerificationFailed.exit_code

    @cli.errorhandler(NoSignatureMatch)
    def no_signature_match(error):
        measured = error.details.get("metrics", {})
        counts = ", ".join(f"{name}={value}" for name, value in measured.items())
        return f"{error.message} ({counts})", NoSignatureMatch.exit_code

    return cli
