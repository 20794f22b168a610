"""Style-transformation action space."""

from .catalog import (CATALOG, TRANSFORM_IDS, InapplicableAction, Site,
                      TransformAction, apply, enumerate_actions)

__all__ = ["CATALOG", "TRANSFORM_IDS", "InapplicableAction", "Site",
           "TransformAction", "apply", "enumerate_actions"]
