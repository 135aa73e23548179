from dataclasses import dataclass, field
from typing import Callable


@dataclass(frozen=True)
class Command:
    name: str
    handler: Callable
    help: str = ""
    requires: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()


@dataclass
class CommandRouter:
    """Per-module registry of subcommands, collected by ``core.factory``."""

    tags: list[str] = field(default_factory=list)
    commands: list[Command] = field(default_factory=list)

    def command(self, name: str, *, help: str = "", requires=(), flags=()):
        def decorator(handler):
            self.commands.append(
                Command(
                    name=name,
                    handler=handler,
                    help=help,
                    requires=tuple(requires),
                    flags=tuple(flags),
                )
            )
            return handler

        return decorator
