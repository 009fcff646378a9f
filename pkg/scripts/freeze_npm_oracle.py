#!/usr/bin/env python3
"""Regenerate tests/fixtures/npm_pack_oracle.json from a real npm.

Each tree is written to a temporary directory and packed with
`npm pack --dry-run --json`; the resulting file list is frozen next to the
tree. Requires npm on PATH. Run from the repository root:

    python scripts/freeze_npm_oracle.py
"""

from __future__ import annotations

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "npm_pack_oracle.json"

X = "x\n"

TREES: dict[str, dict] = {
    "whitelist_dist": {
        "package": {"files": ["dist"]},
        "files": {"dist/cli.js": X, "src/a.ts": X},
    },
    "no_rules_everything_ships": {
        "package": {},
        "files": {"cli.js": X, "cli.js.map": X, ".env": "A=1\n"},
    },
    "npmignore_maps": {
        "package": {},
        "files": {".npmignore": "*.map\n", "cli.js": X, "cli.js.map": X},
    },
    "gitignore_fallback": {
        "package": {},
        "files": {
            ".gitignore": "node_modules/\n.env\n*.log\ndist/\n",
            ".env": X, "app.log": X, "dist/x.js": X, "src/a.js": X,
        },
    },
    "npmignore_beats_gitignore": {
        "package": {},
        "files": {
            ".gitignore": "*.log\n", ".npmignore": "*.tmp\n",
            "a.log": X, "b.tmp": X, "c.js": X,
        },
    },
    "whitelist_root_glob": {
        "package": {"files": ["*.js"]},
        "files": {"a.js": X, "lib/b.js": X, "lib/c.ts": X},
    },
    "whitelist_globstar": {
        "package": {"files": ["**/*.js"]},
        "files": {"a.js": X, "lib/b.js": X, "lib/deep/d.js": X, "lib/c.ts": X},
    },
    "whitelist_negation": {
        "package": {"files": ["dist", "!dist/*.map"]},
        "files": {"dist/a.js": X, "dist/a.js.map": X, "dist/sub/b.js.map": X},
    },
    "whitelist_ignores_root_ignore_files": {
        "package": {"files": ["dist"]},
        "files": {
            ".npmignore": "*.map\n", ".gitignore": "dist/b\n",
            "dist/a.js": X, "dist/a.js.map": X, "dist/b": X,
            "dist/.npmignore": "*.log\n", "dist/debug.log": X,
        },
    },
    "forced_readme_license": {
        "package": {},
        "files": {
            ".npmignore": "README*\nLICENSE*\n*.md\nlicence\n",
            "README.md": X, "LICENSE.txt": X, "licence": X, "CHANGELOG.md": X,
            "docs/README.md": X, "x.js": X,
        },
    },
    "forced_main_and_bin": {
        "package": {"main": "lib/index.js", "bin": {"tool": "./bin/tool.js"}, "files": ["README.md"]},
        "files": {"lib/index.js": X, "lib/other.js": X, "bin/tool.js": X, "README.md": X},
    },
    "nested_ignore_accumulates": {
        "package": {},
        "files": {
            ".gitignore": "*.log\n", "x.log": X,
            "sub/.npmignore": "*.txt\n", "sub/a.log": X, "sub/b.txt": X, "sub/c.js": X,
        },
    },
    "anchored_patterns": {
        "package": {},
        "files": {
            ".npmignore": "/build\nsrc/gen\n",
            "build/a.js": X, "src/build/b.js": X, "src/gen/c.js": X, "lib/src/gen/d.js": X,
        },
    },
    "trailing_slash_dirs_only": {
        "package": {},
        "files": {".npmignore": "tmp/\n", "tmp": "file\n", "sub/tmp/x": X},
    },
    "builtin_excludes": {
        "package": {},
        "files": {
            ".DS_Store": X, ".a.swp": X, "npm-debug.log": X, "package-lock.json": "{}\n",
            "x.orig": X, ".npmrc": X, "yarn.lock": X, "node_modules/q/index.js": X,
            "sub/node_modules/z.js": X, "sub/.npmrc": X, "index.js": X,
        },
    },
    "whitelist_star_includes_dotfiles": {
        "package": {"files": ["*"]},
        "files": {"a.js": X, ".env": X, "x/.hidden": X},
    },
    "negated_file_reinclude": {
        "package": {},
        "files": {".npmignore": "*.log\n!keep.log\n", "a.log": X, "keep.log": X, "d/keep.log": X},
    },
    "leak_replica": {
        "package": {"main": "cli.js"},
        "files": {
            "tsconfig.json": '{"compilerOptions": {"sourceMap": true}}\n',
            "cli.js": "//# sourceMappingURL=cli.js.map\n", "cli.js.map": "{}\n",
            "src/cli.ts": X, ".vscode/settings.json": "{}\n",
        },
    },
    "nested_negation_under_excluded_dir": {
        "package": {},
        "files": {".npmignore": "vendor/\n", "vendor/.npmignore": "!keep.js\n", "vendor/keep.js": X, "a.js": X},
    },
    "dir_slash_then_negated_child": {
        # npm walks the directory because of the negation and then includes every
        # file in it; gitignore semantics exclude logs/a.log. Known divergence.
        "known_divergence": True,
        "package": {},
        "files": {".npmignore": "logs/\n!logs/keep.log\n", "logs/a.log": X, "logs/keep.log": X},
    },
}


def npm_pack_files(tree: dict) -> list[str]:
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        for rel, content in tree["files"].items():
            path = root / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(content)
        manifest = {"name": "fixture", "version": "1.0.0", **tree["package"]}
        (root / "package.json").write_text(json.dumps(manifest, indent=2) + "\n")
        proc = subprocess.run(
            ["npm", "pack", "--dry-run", "--json", "--ignore-scripts"],
            cwd=root, capture_output=True, text=True, check=True,
        )
        return sorted(entry["path"] for entry in json.loads(proc.stdout)[0]["files"])


def main() -> int:
    if shutil.which("npm") is None:
        print("npm not found on PATH", file=sys.stderr)
        return 2
    version = subprocess.run(["npm", "--version"], capture_output=True, text=True).stdout.strip()
    frozen = {"npm_version": version, "trees": {}}
    for name, tree in TREES.items():
        frozen["trees"][name] = {**tree, "npm_included": npm_pack_files(tree)}
        print(f"{name}: {frozen['trees'][name]['npm_included']}")
    OUT.write_text(json.dumps(frozen, indent=2, sort_keys=True) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
