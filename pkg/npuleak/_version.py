__version__ = "0.1.0"
__author__ = "npuleak contributors"
__copyright__ = "Copyright (C) 2026 npuleak contributors"
