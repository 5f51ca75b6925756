from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    app_name: str = "nilact"

    # Order cap for closures and dense multiplication tables
    cap: int = 10080

    # Enumeration limits
    aut_cap: int = 512  # largest |A| whose automorphisms are enumerated
    lattice_cap: int = 96  # largest |G| for full subgroup lattices
    enumeration_cap: int = 1 << 20  # candidate matrices/images per enumeration
    # Above this many automorphisms the oracles compare counts, and checks
    # that are additive in the map run over a basis of End(A)
    oracle_cap: int = 4096

    # Depth of the GL_n(Z) commutator witness
    witness_depth: int = 8

    # Suite execution
    jobs: int = 1
    log_level: str = "WARNING"

    # Pydantic v2 settings; NILACT_CAP overrides cap, and so on
    model_config = SettingsConfigDict(env_prefix="NILACT_", env_file=".env", extra="ignore")

    def resolve_cap(self, cap: int | None) -> int:
        """Explicit cap if given, otherwise the configured one"""
        return self.cap if cap is None else cap


settings = Settings()
