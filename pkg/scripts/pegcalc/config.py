"""
Runtime settings for pegcalc.
"""

from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings.

    Only ``NO_COLOR`` is read from the environment; everything else comes
    from CLI flags or the scenario file. Any value of ``NO_COLOR``, empty
    included, disables colored log output.
    """

    model_config = SettingsConfigDict(case_sensitive=True, extra="ignore")

    NO_COLOR: Optional[str] = None

    @property
    def colors_enabled(self) -> bool:
        return self.NO_COLOR is None


def get_settings() -> Settings:
    """Read settings fresh from the environment."""
    return Settings()
