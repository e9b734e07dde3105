"""On-disk formats: JSON documents, CSV exports and binary caches."""
