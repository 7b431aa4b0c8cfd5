"""JSON Schemas for the documents written by the command-line tool."""

_number_or_null = {"type": ["number", "null"]}

SWEEP_REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "SweepReport",
    "type": "object",
    "required": ["schema_version", "config", "n", "n_core", "k_range", "losses", "k_star", "skipped", "boundary"],
    "properties": {
        "schema_version": {"const": 1},
        "config": {"type": "object"},
        "n": {"type": "integer", "minimum": 4},
        "n_core": {"type": "integer", "minimum": 2},
        "k_range": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "losses": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k", "loss"],
                "properties": {"k": {"type": "integer", "minimum": 2}, "loss": {"type": "number", "minimum": 0}},
            },
        },
        "k_star": {"type": "integer", "minimum": 2},
        "skipped": {
            "type": "array",
            "items": {"type": "object", "required": ["k", "reason"]},
        },
        "boundary": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["lambda", "dc", "n", "removed", "isolated", "removed_indices"],
                },
            ]
        },
        "per_k": {"type": "object"},
        "timings": {"type": "object", "additionalProperties": {"type": "number"}},
        "dataset": {"type": "object"},
    },
}

TRIALS_REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "TrialsReport",
    "type": "object",
    "required": ["schema_version", "config", "trials", "nc", "acc", "k_stars", "seeds", "true_k"],
    "properties": {
        "schema_version": {"const": 1},
        "config": {"type": "object"},
        "trials": {"type": "integer", "minimum": 1},
        "nc": {"type": "integer"},
        "acc": _number_or_null,
        "k_stars": {"type": "array", "items": {"type": "integer"}},
        "seeds": {"type": "array", "items": {"type": "integer"}},
        "true_k": {"type": ["integer", "null"]},
        "timings": {"type": "object"},
    },
}

BENCH_REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "BenchReport",
    "type": "object",
    "required": ["schema_version", "trials", "seed", "config", "rows"],
    "properties": {
        "schema_version": {"const": 1},
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "config": {"type": "object"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["family", "level", "n", "true_k", "nc", "acc", "k_stars"],
                "properties": {
                    "family": {"enum": ["noise", "density", "count"]},
                    "level": {"type": "integer"},
                    "n": {"type": "integer"},
                    "true_k": {"type": "integer"},
                    "nc": {"type": "integer"},
                    "acc": {"type": "number", "minimum": 0, "maximum": 1},
                    "k_stars": {"type": "array", "items": {"type": "integer"}},
                },
            },
        },
        "timings": {"type": "object"},
    },
}

RUN_MANIFEST = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "RunManifest",
    "type": "object",
    "required": ["subcommand", "config", "input_sha256", "outputs", "timings"],
    "properties": {
        "subcommand": {"type": "string"},
        "config": {"type": "object"},
        "input_sha256": {"type": ["string", "null"]},
        "outputs": {"type": "array", "items": {"type": "string"}},
        "timings": {"type": "object"},
    },
}
