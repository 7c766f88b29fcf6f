"""npuleak

Memory-bandwidth side channel on a simulated tiled DNN accelerator: trace generation, the boundary and layer
classification attack, and the tile-size and traffic-shaping countermeasures.
"""

from ._version import __author__, __copyright__, __version__

# setup module logging with null handler
import logging
logging.getLogger(__name__).addHandler(logging.NullHandler())

from . import exceptions
from . import catalog
from . import sim
from . import tuning
from . import shaping
from . import features
from . import detection
from . import classify
from . import reporting
from . import harness
