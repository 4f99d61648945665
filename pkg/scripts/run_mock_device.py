#!/usr/bin/env python3
"""Run the bundled mock IFTTT-shaped device on a fixed port and print
every trigger it receives. Useful for demos and frontend E2E tests."""

import argparse
import time

from greensched.mock_device import MockDevice


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--status", type=int, nargs="*", default=[200],
                        help="HTTP status script, last entry repeats")
    args = parser.parse_args()
    with MockDevice(status_script=args.status) as device:
        print(f"mock device listening at {device.base_url}", flush=True)
        seen = 0
        while True:
            time.sleep(0.2)
            while seen < len(device.requests):
                req = device.requests[seen]
                print(f"trigger event={req.event} body={req.body}", flush=True)
                seen += 1


if __name__ == "__main__":
    main()
