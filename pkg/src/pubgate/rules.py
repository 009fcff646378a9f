"""Rule catalog. CWE mappings are our own choice per rule."""

from __future__ import annotations

from pubgate.model import Category, Finding, RuleDescriptor, Severity

_C = Category
_S = Severity

RULES: dict[str, RuleDescriptor] = {
    r.rule_id: r
    for r in [
        # source maps
        RuleDescriptor(
            "SM001", _C.SOURCE_MAP, _S.CRITICAL,
            "Published source map embeds original source",
            "A .map file that ships with the package carries a populated sourcesContent "
            "array, so anyone who installs the package can read the original source.",
            "Exclude source maps from the package: add `*.map` to .npmignore or restrict "
            "the package.json \"files\" list to compiled output only. If maps must ship, "
            "build them without sourcesContent.",
            "CWE-540",
        ),
        RuleDescriptor(
            "SM002", _C.SOURCE_MAP, _S.HIGH,
            "Source map present in package",
            "A .map file ships with the package. Even positional mappings reveal file "
            "names and code structure.",
            "Add `*.map` to .npmignore (or drop maps from the \"files\" list) unless "
            "shipping maps is a deliberate decision.",
            "CWE-200",
        ),
        RuleDescriptor(
            "SM003", _C.SOURCE_MAP, _S.HIGH,
            "sourceMappingURL comment in compiled output",
            "A shipped .js/.css file still points at a source map, which tells readers "
            "where to fetch the original source.",
            "Strip the sourceMappingURL pragma from production builds (disable source "
            "maps for the release build or use hidden source maps).",
            "CWE-615",
        ),
        RuleDescriptor(
            "SM004", _C.SOURCE_MAP, _S.LOW,
            "Unparseable source map in package",
            "A shipped .map file could not be parsed as JSON, so its exposure cannot be "
            "verified.",
            "Remove the file from the package or regenerate it; a map that cannot be "
            "inspected should not ship.",
        ),
        RuleDescriptor(
            "SM005", _C.SOURCE_MAP, _S.MEDIUM,
            "Unpublished source map embeds original source",
            "A .map file with sourcesContent exists in the tree but is currently excluded "
            "from the package. One packaging change would expose the source.",
            "Build without sourcesContent or delete stale maps, and keep `*.map` in the "
            "ignore rules.",
            "CWE-540",
        ),
        # packaging configuration
        RuleDescriptor(
            "CF001", _C.CONFIG, _S.CRITICAL,
            "No package whitelist and no .npmignore",
            "package.json has no \"files\" whitelist and there is no .npmignore, so npm "
            "decides what ships from .gitignore or ships everything.",
            "Add a \"files\" array to package.json listing only the build output (for "
            "example [\"dist\"]), or create a .npmignore that excludes sources, maps, "
            "env files, keys and logs.",
            "CWE-538",
        ),
        RuleDescriptor(
            "CF002", _C.CONFIG, _S.HIGH,
            "Source maps enabled without an exclusion rule",
            "tsconfig enables compilerOptions.sourceMap but nothing keeps the generated "
            "*.map files out of the package.",
            "Add `*.map` to .npmignore, restrict \"files\" to exclude maps, or set "
            "\"sourceMap\": false for the release build.",
            "CWE-540",
        ),
        RuleDescriptor(
            "CF003", _C.CONFIG, _S.MEDIUM,
            "Ignore file misses a risky file class",
            "An ignore file is in effect but does not cover a class of sensitive files "
            "present in the project, so those files ship.",
            "Add the listed patterns to the ignore file named in the finding.",
            "CWE-538",
        ),
        RuleDescriptor(
            "CF004", _C.CONFIG, _S.HIGH,
            "Dockerfile copies the whole context without .dockerignore",
            "A COPY/ADD instruction copies the entire build context and no .dockerignore "
            "limits it, so env files, keys and VCS data end up in the image.",
            "Create a .dockerignore (exclude .git, node_modules, .env*, *.pem, *.key, "
            "*.map, *.log) or copy only the needed paths.",
            "CWE-538",
        ),
        RuleDescriptor(
            "CF005", _C.CONFIG, _S.MEDIUM,
            "files whitelist ships a risky file class",
            "The package.json \"files\" whitelist matches sensitive files, so the "
            "whitelist has drifted from the build output.",
            "Narrow the \"files\" entries, or add negated entries such as \"!**/*.map\".",
            "CWE-538",
        ),
        RuleDescriptor(
            "CF006", _C.CONFIG, _S.LOW,
            "Unparseable configuration file",
            "A packaging or build configuration file could not be parsed, so the checks "
            "that depend on it were skipped.",
            "Fix the syntax error so the file can be analysed.",
        ),
        # secrets
        RuleDescriptor(
            "SC001", _C.SECRET, _S.CRITICAL,
            "AWS access key ID",
            "An AWS access key ID is hardcoded.",
            "Revoke the key in IAM, then load credentials from the environment or a "
            "secrets manager instead of the source tree.",
            "CWE-798",
        ),
        RuleDescriptor(
            "SC002", _C.SECRET, _S.CRITICAL,
            "Stripe secret key",
            "A Stripe secret key is hardcoded. Live keys are critical; test keys are "
            "reported for visibility only.",
            "Roll the key in the Stripe dashboard and read it from an environment "
            "variable.",
            "CWE-798",
        ),
        RuleDescriptor(
            "SC003", _C.SECRET, _S.MEDIUM,
            "JSON Web Token",
            "A signed JWT is embedded in the code. It may grant access until it expires.",
            "Remove the token, invalidate it if it is long-lived, and obtain tokens at "
            "runtime.",
            "CWE-798",
        ),
        RuleDescriptor(
            "SC004", _C.SECRET, _S.CRITICAL,
            "Connection string with credentials",
            "A database or broker URL includes a username and password.",
            "Change the password and move the connection string to an environment "
            "variable or secrets manager.",
            "CWE-798",
        ),
        RuleDescriptor(
            "SC005", _C.SECRET, _S.CRITICAL,
            "Private key block",
            "PEM-encoded private key material is embedded in a file.",
            "Treat the key as compromised: rotate it and keep key material outside the "
            "repository.",
            "CWE-321",
        ),
        RuleDescriptor(
            "SC006", _C.SECRET, _S.MEDIUM,
            "Hardcoded credential assignment",
            "A variable named like a secret, token, password or API key is assigned a "
            "literal value.",
            "Read the value from configuration or the environment and rotate the "
            "exposed credential.",
            "CWE-798",
        ),
        # dependencies
        RuleDescriptor(
            "DP001", _C.DEPENDENCY, _S.HIGH,
            "Unpinned dependency (wildcard or tag)",
            "A runtime dependency accepts any version (\"*\", bare name, or a dist-tag "
            "such as \"latest\").",
            "Pin an exact version and commit a lockfile.",
            "CWE-829",
        ),
        RuleDescriptor(
            "DP002", _C.DEPENDENCY, _S.MEDIUM,
            "Dependency version range",
            "A dependency uses a version range, so new releases are picked up without "
            "review.",
            "Pin an exact version, or rely on a committed lockfile for reproducible "
            "installs.",
            "CWE-829",
        ),
        RuleDescriptor(
            "DP003", _C.DEPENDENCY, _S.MEDIUM,
            "Missing lockfile",
            "Dependencies are declared but no lockfile records the resolved versions "
            "and integrity hashes.",
            "Generate and commit a lockfile (npm install writes package-lock.json; for "
            "pip use pip-compile or pin every requirement with ==).",
            "CWE-494",
        ),
        RuleDescriptor(
            "DP004", _C.DEPENDENCY, _S.HIGH,
            "Install hook script",
            "package.json defines a script that npm runs automatically on install.",
            "Remove the hook or move the work into an explicit build step; review what "
            "the script executes.",
            "CWE-829",
        ),
        RuleDescriptor(
            "DP005", _C.DEPENDENCY, _S.HIGH,
            "Dependency fetched over an insecure URL",
            "A dependency or package index is fetched over http:// or git://, which "
            "allows tampering in transit.",
            "Use an https:// URL or a registry version instead.",
            "CWE-319",
        ),
        RuleDescriptor(
            "DP006", _C.DEPENDENCY, _S.MEDIUM,
            "URL dependency without integrity pin",
            "A dependency is installed from a URL without a commit hash or content "
            "hash, so the fetched code can change silently.",
            "Pin git dependencies to a full commit SHA, add a hash to URL requirements, "
            "or publish the dependency to a registry.",
            "CWE-494",
        ),
        RuleDescriptor(
            "DP007", _C.DEPENDENCY, _S.LOW,
            "Unparseable dependency manifest",
            "A dependency manifest could not be parsed; dependency checks were skipped "
            "for it.",
            "Fix the manifest syntax so dependencies can be audited.",
        ),
        # artifact hygiene
        RuleDescriptor(
            "AR001", _C.ARTIFACT, _S.CRITICAL,
            "Key material in package",
            "A private key or keystore file ships with the package.",
            "Remove the file from the package (ignore rule or \"files\" list) and rotate "
            "the key.",
            "CWE-538",
        ),
        RuleDescriptor(
            "AR002", _C.ARTIFACT, _S.CRITICAL,
            "Environment file in package",
            "A .env file ships with the package. Template variants (.env.example, "
            ".env.sample, .env.template) are reported as info.",
            "Add `.env` and `.env.*` to .npmignore (or keep them out of \"files\") and "
            "rotate anything the file contained.",
            "CWE-538",
        ),
        RuleDescriptor(
            "AR003", _C.ARTIFACT, _S.MEDIUM,
            "Editor or OS metadata in package",
            "IDE settings or editor/OS metadata (.vscode/, .idea/, *.swp, .DS_Store) "
            "ship with the package.",
            "Add the listed path to .npmignore.",
            "CWE-538",
        ),
        RuleDescriptor(
            "AR004", _C.ARTIFACT, _S.MEDIUM,
            "Debug log or coverage output in package",
            "Log files or test coverage output ship with the package; they often "
            "contain paths, environment details or data.",
            "Add `*.log`, `coverage/` and `.nyc_output/` to .npmignore.",
            "CWE-532",
        ),
        RuleDescriptor(
            "AR005", _C.ARTIFACT, _S.HIGH,
            "Anomalously large file in package",
            "A shipped file is far larger than is typical for its type, which usually "
            "means bundled sources, embedded data or a build accident.",
            "Inspect the file; exclude it from the package or fix the build step that "
            "produced it.",
        ),
        RuleDescriptor(
            "AR006", _C.ARTIFACT, _S.MEDIUM,
            "Version-control internals in package",
            "Files from a .git directory are in the publish set.",
            "Exclude .git/ from the package; check for a negated ignore rule "
            "re-including it.",
            "CWE-527",
        ),
    ]
}


def get_rule(rule_id: str) -> RuleDescriptor:
    try:
        return RULES[rule_id]
    except KeyError:
        raise KeyError(f"unknown rule id: {rule_id}") from None


def make_finding(
    rule_id: str,
    file: str,
    message: str,
    *,
    line: int | None = None,
    severity: Severity | None = None,
    remediation: str | None = None,
    evidence: str | None = None,
) -> Finding:
    rule = get_rule(rule_id)
    return Finding(
        rule_id=rule_id,
        category=rule.category,
        severity=rule.default_severity if severity is None else severity,
        file=file,
        line=line,
        message=message,
        remediation=remediation or rule.remediation,
        cwe=rule.cwe,
        evidence=evidence,
    )
