from .json_enum import JsonEnum
from .to_json_encoder import ToJsonEncoder
