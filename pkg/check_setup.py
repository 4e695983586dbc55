#!/usr/bin/env python3
"""
Quick check that the simulator can run here
"""

import os
import sys


def check_python_version():
    """Check Python version"""
    print("✓ Checking Python version...")
    version = sys.version_info
    if version >= (3, 9):
        print(f"  ✓ Python {version.major}.{version.minor}.{version.micro} is compatible")
        return True
    print(f"  ✗ Python {version.major}.{version.minor}.{version.micro} is too old (need 3.9+)")
    return False


def check_imports():
    """Check the numerical and configuration stack"""
    print("\n✓ Checking Python imports...")
    required = [
        ("numpy", "numpy"),
        ("scipy", "scipy.linalg"),
        ("pandas", "pandas"),
        ("pydantic", "pydantic"),
        ("pydantic-settings", "pydantic_settings"),
        ("python-dotenv", "dotenv"),
        ("jinja2", "jinja2"),
    ]

    all_ok = True
    for package, module in required:
        try:
            __import__(module)
            print(f"  ✓ {package}")
        except ImportError:
            print(f"  ✗ {package} - NOT INSTALLED")
            all_ok = False

    return all_ok


def check_config(path):
    """Validate a run configuration and its dispersion file"""
    print(f"\n✓ Checking configuration {path}...")
    try:
        from su11sim.config import load_run_config
        from su11sim.errors import Su11Error

        config = load_run_config(path)
    except Su11Error as e:
        print(f"  ✗ {e}")
        return False
    except ImportError as e:
        print(f"  ✗ Cannot import su11sim: {e}")
        return False

    print(f"  ✓ Variant: {config.device.variant.value}, pump: {config.pump.regime.value}")
    print(f"  ✓ Grid: {config.grid.points} points, {len(config.gammas)} gain value(s)")
    if config.dispersion.file:
        print(f"  ✓ Dispersion file: {config.dispersion.file}")
    else:
        print("  ✓ Dispersion: built-in bulk KTP")
    return True


def check_poling():
    """Derive the poling period from the default dispersion"""
    print("\n✓ Checking dispersion model...")
    try:
        from su11sim.dispersion.model import default_ktp, poling_period

        period = poling_period(default_ktp(), 766e-9)
        print(f"  ✓ Poling period for a 766 nm pump: {period * 1e6:.3f} um")
        return True
    except Exception as e:
        print(f"  ✗ Error evaluating dispersion: {e}")
        return False


def check_output_dir():
    """Check the output directory is writable"""
    print("\n✓ Checking output directory...")
    try:
        from su11sim.config import settings
        from su11sim.utils.validators import validate_output_dir
    except ImportError as e:
        print(f"  ✗ Cannot import su11sim: {e}")
        return False

    check = validate_output_dir(settings.output_dir)
    if check["valid"]:
        print(f"  ✓ Writing results to {check['path']}")
        return True
    print(f"  ✗ {settings.output_dir}: {check['error']}")
    return False


def main():
    print("=" * 60)
    print("su11sim - Setup Check")
    print("=" * 60)
    print()

    results = []
    results.append(("Python Version", check_python_version()))
    results.append(("Python Imports", check_imports()))
    results.append(("Dispersion", check_poling()))
    results.append(("Output Directory", check_output_dir()))

    config_path = sys.argv[1] if len(sys.argv) > 1 else "configs/compensated_cw.json"
    if os.path.exists(config_path):
        results.append(("Configuration", check_config(config_path)))

    print("\n" + "=" * 60)
    print("Check Summary")
    print("=" * 60)

    passed = sum(1 for _, result in results if result)
    total = len(results)

    for name, result in results:
        status = "✓ PASS" if result else "✗ FAIL"
        print(f"  {status} - {name}")

    print()
    print(f"Results: {passed}/{total} checks passed")

    if passed == total:
        print("\nAll checks passed.")
        print(f"   Run: python -m su11sim sweep -c {config_path}")
        return 0
    print("\nSome checks failed. Please fix the issues above.")
    print("   See README.md for setup instructions.")
    return 1


if __name__ == "__main__":
    sys.exit(main())
