import os


def _int_env(name: str, default: int) -> int:
    value = os.environ.get(name)
    return int(value) if value else default


class Settings:

    @property
    def field_cap(self) -> int:
        return _int_env("FQCOVER_FIELD_CAP", 2**20)

    @property
    def table_limit(self) -> int:
        return _int_env("FQCOVER_TABLE_LIMIT", 4096)

    @property
    def enumeration_budget(self) -> int:
        return _int_env("FQCOVER_ENUMERATION_BUDGET", 10**7)

    @property
    def brute_force_limit(self) -> int:
        return _int_env("FQCOVER_BRUTE_FORCE_LIMIT", 10**8)

    @property
    def workers(self) -> int:
        return _int_env("FQCOVER_WORKERS", 1)

    @property
    def missing_limit(self) -> int:
        return _int_env("FQCOVER_MISSING_LIMIT", 32)

    @property
    def subfield_max_d(self) -> int:
        return _int_env("FQCOVER_SUBFIELD_MAX_D", 6)

    def __str__(self):
        return (
            f"Settings(field_cap={self.field_cap}, table_limit={self.table_limit}, "
            f"enumeration_budget={self.enumeration_budget}, "
            f"brute_force_limit={self.brute_force_limit}, workers={self.workers}, "
            f"missing_limit={self.missing_limit}, subfield_max_d={self.subfield_max_d})"
        )


settings = Settings()
