# -*- coding: utf-8 -*-
import math
import os
import sys
from dotenv import load_dotenv

load_dotenv()
sys.path.insert(0, os.path.dirname(__file__))

from src.kms import KmsInstance, KmsState, residual_sweep
from src.spectral import parry_measure, rpf_solve
from src.symbolic import CylinderFunction, CylinderPotential, full_shift, golden_mean_shift
from src.thermo import bowen_root, entropy_variational, pressure, pressure_minmax
from src.transfer import TransferOperator

GOLDEN = (1 + math.sqrt(5)) / 2


def show(label, value, expected):
    print(f"{label:<28} {value:.15g}   (expected {expected:.15g}, diff {abs(value - expected):.2e})")


def test_pressure():
    print("\n" + "="*60)
    print("Test 1: Pressure")
    print("="*60)

    show("P(0) on full 2-shift", pressure(CylinderPotential.constant(full_shift(2), 0.0)), math.log(2))
    show("P(0) on golden mean", pressure(CylinderPotential.constant(golden_mean_shift(), 0.0)), math.log(GOLDEN))
    b211 = CylinderPotential.two_coordinate(full_shift(2), [[2.0, 1.0], [1.0, 1.0]])
    show("P(log B), B=[[2,1],[1,1]]", pressure(b211), math.log((3 + math.sqrt(5)) / 2))


def test_entropy():
    print("\n" + "="*60)
    print("Test 2: Entropy (inf-formula)")
    print("="*60)

    golden = golden_mean_shift()
    for depth in (1, 2):
        result = entropy_variational(parry_measure(golden), CylinderPotential.constant(golden, 0.0), depth)
        show(f"J_{depth}* of Parry measure", result.value, math.log(GOLDEN))


def test_minmax():
    print("\n" + "="*60)
    print("Test 3: Min-max pressure")
    print("="*60)

    b211 = CylinderPotential.two_coordinate(full_shift(2), [[2.0, 1.0], [1.0, 1.0]])
    result = pressure_minmax(b211, depth=1, restarts=4, seed=7)
    show("sup inf, 4 restarts", result.value, pressure(b211))
    print(f"iterations: {result.diagnostics.iterations}, |grad| = {result.diagnostics.gradient_norm:.2e}")


def test_kms():
    print("\n" + "="*60)
    print("Test 4: KMS states")
    print("="*60)

    spec = full_shift(2)
    H = CylinderFunction.from_matrix(spec, [[3.0, 2.0], [2.0, 2.0]])
    off = KmsInstance.build(H, 1.0)
    report = residual_sweep(off, KmsState.from_eigen(off.spectral, off.op), n=2, depth=3)
    print(f"beta = 1:        crossed {report.crossed:.2e}, approx {report.approx:.2e}  (lambda = {off.lambda_:.6f})")
    inst = KmsInstance.at_critical_beta(H)
    state = KmsState.from_eigen(inst.spectral, inst.op)
    report = residual_sweep(inst, state, n=2, depth=3)
    print(f"beta = {inst.beta:.6f}: crossed {report.crossed:.2e}, approx {report.approx:.2e}")
    report = residual_sweep(inst, state.tilted(0, 0.05), n=2, depth=3)
    print(f"tilted state:    crossed {report.crossed:.2e}, approx {report.approx:.2e}")

    show("Bowen root, H = 3", bowen_root(CylinderFunction.constant(spec, 3.0)), math.log(2) / math.log(3))


def test_spectral():
    print("\n" + "="*60)
    print("Test 5: Perron eigendata")
    print("="*60)

    spectral = rpf_solve(TransferOperator.from_potential(CylinderPotential.constant(golden_mean_shift(), 0.0)))
    show("lambda (golden mean)", spectral.lambda_, GOLDEN)
    print(f"nu  = {spectral.nu.weights}")
    print(f"phi = {spectral.phi.values}")
    print(f"iterations = {spectral.iterations}")


def main():
    print("\n" + "="*60)
    print("thermoformal - Smoke Run")
    print("="*60)
    print("\n1. Pressure")
    print("2. Entropy")
    print("3. Min-max Pressure")
    print("4. KMS States")
    print("5. Perron Eigendata")
    print("6. Run All")
    print("0. Exit")

    while True:
        try:
            choice = input("\nSelect (0-6): ").strip()

            if choice == "0":
                break
            elif choice == "1":
                test_pressure()
            elif choice == "2":
                test_entropy()
            elif choice == "3":
                test_minmax()
            elif choice == "4":
                test_kms()
            elif choice == "5":
                test_spectral()
            elif choice == "6":
                test_pressure()
                test_entropy()
                test_minmax()
                test_kms()
                test_spectral()
                print("\nAll checks completed!")
            else:
                print("Invalid choice (0-6)")

        except KeyboardInterrupt:
            print("\nExiting...")
            break
        except Exception as e:
            print(f"Error: {e}")
            import traceback
            traceback.print_exc()


if __name__ == "__main__":
    main()
