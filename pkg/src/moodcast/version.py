"""Single source of the package version string."""

PACKAGE_VERSION = "0.1.0"
