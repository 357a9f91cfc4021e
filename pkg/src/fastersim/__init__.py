# SPDX-FileCopyrightText: 2025-present DouglasMacKrell <d.mackrell@gmail.com>
#
# SPDX-License-Identifier: MIT

"""fastersim - fair-share incentivized relaying for wireless ad hoc networks."""

from fastersim.__about__ import __version__

__all__ = ["__version__"]
