"""
Pydantic model for a CLI invocation.
"""

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

RunMode = Literal["curve", "sweep", "verdict", "convergence", "config"]


class RunConfig(BaseModel):
    """What the CLI was asked to do and where to write it."""
    model_config = ConfigDict(frozen=True)

    mode: RunMode
    config_path: Path
    output_path: Optional[Path] = Field(None, description="None writes to stdout")
    precision: int = Field(default=12, ge=6, le=17, description="CSV significant digits")
    threshold: Optional[float] = Field(None, gt=0.0, description="Overrides witness.threshold")
    include_negativity: Optional[bool] = Field(
        None,
        description="Negativity cross-check; None picks the mode default",
    )

    @property
    def negativity_enabled(self) -> bool:
        """On for verdict mode, off for sweeps unless requested."""
        if self.include_negativity is not None:
            return self.include_negativity
        return self.mode == "verdict"
