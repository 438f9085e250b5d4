# flake8: noqa: F401
from .json_export import write_json, ManifestExport
from .capacity_export import CapacityExport
from .vault_export import VaultExport
from .tomography_export import TomographyExport
from .divisibility_export import DivisibilityExport
