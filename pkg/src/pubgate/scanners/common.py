from __future__ import annotations

import fnmatch
import re
from dataclasses import dataclass

from pubgate.snapshot import UNLOADED_DIRS


def in_vendor_dir(path: str) -> bool:
    return any(part in UNLOADED_DIRS for part in path.split("/")[:-1])


def basename(path: str) -> str:
    return path.rsplit("/", 1)[-1]


def line_of(text: str, pattern: str, flags: int = 0) -> int | None:
    match = re.search(pattern, text, flags | re.MULTILINE)
    if match is None:
        return None
    return text.count("\n", 0, match.start()) + 1


ENV_TEMPLATE_SUFFIXES = (".example", ".sample", ".template")


def is_env_file(name: str) -> bool:
    return name == ".env" or name.startswith(".env.")


def is_env_template(name: str) -> bool:
    return is_env_file(name) and name.lower().endswith(ENV_TEMPLATE_SUFFIXES)


@dataclass(frozen=True)
class RiskyClass:
    """A class of files that should never ship, with the ignore lines that cover it."""

    name: str
    globs: tuple[str, ...]

    def matches(self, path: str) -> bool:
        name = basename(path)
        if self.name == "env":
            return is_env_file(name) and not is_env_template(name)
        return any(fnmatch.fnmatchcase(name.lower(), g) for g in self.globs)

    def suggested_lines(self, paths: list[str]) -> list[str]:
        if self.name == "env":
            return [".env", ".env.*", "!.env.example"]
        return sorted({g for g in self.globs for p in paths if fnmatch.fnmatchcase(basename(p).lower(), g)})


KEY_GLOBS = ("*.pem", "*.key", "*.p12", "*.pfx", "id_rsa*", "*.keystore")

RISKY_CLASSES = (
    RiskyClass("map", ("*.map",)),
    RiskyClass("env", (".env", ".env.*")),
    RiskyClass("key", KEY_GLOBS),
    RiskyClass("log", ("*.log",)),
)
