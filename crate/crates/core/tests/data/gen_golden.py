#!/usr/bin/env python3
"""Regenerates golden_frames.hex using pymavlink's MAVLink 1.0 encoder.

Usage: python3 gen_golden.py > golden_frames.hex
"""
import os

os.environ.pop("MAVLINK20", None)
from pymavlink.dialects.v10 import common as m  # noqa: E402


class Sink:
    def write(self, _):
        pass


mav = m.MAVLink(Sink(), srcSystem=1, srcComponent=1)
mav.seq = 0

msgs = [
    m.MAVLink_heartbeat_message(12, 3, 0, 0, 4, 3),
    m.MAVLink_scaled_pressure_message(123456, 1062.3, -0.5, 2150),
    m.MAVLink_attitude_message(4000, 0.1, -0.02, 1.5, 0.25, -0.125, 0.0),
    m.MAVLink_servo_output_raw_message(987654, 0, 1500, 1650, 1350, 1500, 1900, 1100, 0, 0),
    m.MAVLink_rc_channels_override_message(1, 1, 1500, 1500, 1350, 1550, 1650, 1500, 0, 0),
    m.MAVLink_command_long_message(1, 1, 400, 0, 1.0, 0, 0, 0, 0, 0, 0),
    m.MAVLink_command_ack_message(400, 0),
]

for msg in msgs:
    print(msg.pack(mav).hex())
    mav.seq = (mav.seq + 1) % 256
