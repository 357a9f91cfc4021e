"""Version and metadata information for the fastersim package."""

# SPDX-FileCopyrightText: 2025-present DouglasMacKrell <d.mackrell@gmail.com>
#
# SPDX-License-Identifier: MIT
__version__ = "0.1.0"
