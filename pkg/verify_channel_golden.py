#!/usr/bin/env python3
"""
채널 이득 기준값 독립 검증

시뮬레이터 코드를 import 하지 않고 math 만으로 두 기준 사례를 계산함.
tests/test_optics.py 의 기준값은 이 스크립트의 출력과 일치해야 함.
"""
import math


def lambertian_order(half_power_deg: float) -> float:
    return -math.log(2) / math.log(math.cos(math.radians(half_power_deg)))


def los_on_axis() -> float:
    # AP (2.5, 2.5, 3) facing down, receiver (2.5, 2.5, 1) facing up
    n = round(lambertian_order(60.0), 12)
    area = 20e-6
    d = 2.0
    cos_alpha = 1.0
    cos_delta = 1.0
    return (n + 1) * area * cos_alpha ** n * cos_delta / (2 * math.pi * d ** 2)


def irs_worked_case() -> float:
    # AP (2.5, 2.5, 3) facing down, mirror (2.5, 0, 1.5) steered at user (2.5, 2, 1) facing up
    n = round(lambertian_order(60.0), 12)
    area = 20e-6
    mirror_area = 0.25 * 0.10
    rho = 0.95

    ap = (2.5, 2.5, 3.0)
    mirror = (2.5, 0.0, 1.5)
    user = (2.5, 2.0, 1.0)

    ap_to_mirror = [m - a for m, a in zip(mirror, ap)]
    user_to_mirror = [m - u for m, u in zip(mirror, user)]
    d_ml = math.sqrt(sum(c * c for c in ap_to_mirror))
    d_km = math.sqrt(sum(c * c for c in user_to_mirror))

    # AP normal (0, 0, -1); receiver normal (0, 0, 1)
    cos_alpha = -ap_to_mirror[2] / d_ml
    cos_beta = user_to_mirror[2] / d_km

    print(f"  cos alpha = {cos_alpha:.5f}, cos beta = {cos_beta:.5f}")
    print(f"  D_ml = {d_ml:.5f}, D_km = {d_km:.5f}")
    return (
        (n + 1) * rho * area * mirror_area * cos_alpha ** n * cos_beta
        / (2 * math.pi * (d_ml + d_km) ** 2)
    )


def main():
    print(f"lambertian_order(60) = {round(lambertian_order(60.0), 12)!r}")
    print(f"los_gain on-axis     = {los_on_axis():.6e}")
    print("irs_gain worked case:")
    print(f"  h = {irs_worked_case():.6e}")


if __name__ == "__main__":
    main()
