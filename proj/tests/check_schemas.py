"""Validates the bundled data files (and optionally a CLI-produced log)
against the JSON schemas in <data>/schema."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def load(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def validator(schema_dir, name):
    schema = load(schema_dir / name)
    cls = jsonschema.validators.validator_for(schema)
    cls.check_schema(schema)
    return cls(schema)


def main():
    data = pathlib.Path(sys.argv[1])
    cli = sys.argv[2] if len(sys.argv) > 2 else None
    schemas = data / "schema"
    failures = 0

    checks = [
        ("registry.schema.json", [data / "registry.json"]),
        ("api_model.schema.json", [data / "api_model.json"]),
        ("run_config.schema.json", [data / "examples" / "run_config.json"]),
        ("column_map.schema.json", [data / "examples" / "column_map.json"]),
    ]
    for schema_name, documents in checks:
        v = validator(schemas, schema_name)
        for doc in documents:
            errors = list(v.iter_errors(load(doc)))
            for e in errors:
                print(f"{doc}: {'/'.join(map(str, e.path))}: {e.message}")
            failures += len(errors)
            print(f"{doc.name}: {'ok' if not errors else 'INVALID'}")

    if cli:
        record = validator(schemas, "mutation_record.schema.json")
        with tempfile.TemporaryDirectory() as tmp:
            out = pathlib.Path(tmp) / "copies"
            subprocess.run(
                [cli, "seed", "--project", str(data / "template-app"), "--scope", "main",
                 "--cases", "des-cipher", "hostname-verifier-true", "--out", str(out)],
                check=True, capture_output=True)
            lines = [l for l in (out / "mutation_log.jsonl").read_text(encoding="utf-8").splitlines() if l.strip()]
            bad = 0
            for line in lines:
                for e in record.iter_errors(json.loads(line)):
                    print(f"log: {e.message}")
                    bad += 1
            failures += bad
            print(f"mutation log: {len(lines)} records, {'ok' if not bad else 'INVALID'}")
            if not lines:
                failures += 1

    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
