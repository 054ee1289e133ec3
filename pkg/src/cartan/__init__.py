"""Classical bounded symmetric domains, explicit holomorphic maps into them,
and numerical checks of the identities those maps satisfy."""

__version__ = "0.1.0"
