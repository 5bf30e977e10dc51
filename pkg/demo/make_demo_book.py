"""Regenerate demo/handbook.txt (form-feed page separators)."""

from pathlib import Path

PAGES = [
    # page 1
    "The Pocket Training Handbook is a short guide for everyday fitness.\n\n"
    "Each page covers one idea. Every page stands alone.",
    # page 2
    "Losing weight comes down to energy balance.\n"
    "You lose weight when you burn more calories than you eat.\n\n"
    "Crash diets backfire. Slow change is the change that lasts.",
    # page 3
    "Strength training builds muscle. Protein intake supports recovery\n"
    "after every strength session.\n\n"
    "Heavy squats beat machines. Free weights recruit more muscle.",
    # page 4
    "Sugar spikes your insulin fast. Cutting sugar lowers the cravings\n"
    "within a week.\n\n"
    "Hidden sugar hides in sauces. Check every label twice.",
    # page 5
    "Sleep restores your hormone balance. Hormone balance drives the recovery.\n\n"
    "A bench press works the chest. The bench press needs a spotter.",
]

if __name__ == "__main__":
    out = Path(__file__).parent / "handbook.txt"
    out.write_bytes("".join(PAGES).encode("utf-8"))
    print(f"wrote {out}")
