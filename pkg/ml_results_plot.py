import argparse
import sys

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


# Training cost against boosting iteration
def plot_loss_curve(frame, ax):
    ax.plot(frame["iteration"], frame["loss"], marker="o", markersize=3, color="b", label="Training loss")
    ax.set_title("Cost Function")
    ax.set_xlabel("Iteration")
    ax.set_ylabel("Cost")
    ax.legend()


def plot_actual_vs_predicted(frame, ax):
    actual = frame["actual"].to_numpy(dtype=float)
    predicted = frame["predicted"].to_numpy(dtype=float)
    ax.scatter(actual, predicted, color="g", alpha=0.7, label="Examples")

    # Least-squares line needs at least two distinct actual values
    if np.unique(actual).size >= 2:
        slope, intercept = np.polyfit(actual, predicted, 1)
        xs = np.linspace(actual.min(), actual.max(), 50)
        ax.plot(xs, slope * xs + intercept, color="r", label="Regression line")

    ax.set_title("Actual and Predicted WQI")
    ax.set_xlabel("Actual WQI")
    ax.set_ylabel("Predicted WQI")
    ax.legend()


def plot_file(path, ax):
    frame = pd.read_csv(path)
    if {"iteration", "loss"} <= set(frame.columns):
        plot_loss_curve(frame, ax)
    elif {"actual", "predicted"} <= set(frame.columns):
        plot_actual_vs_predicted(frame, ax)
    else:
        raise ValueError(f"{path}: expected iteration/loss or actual/predicted columns")


def render(paths, save=None):
    fig, axes = plt.subplots(1, len(paths), figsize=(6 * len(paths), 5), squeeze=False)
    for path, ax in zip(paths, axes[0]):
        plot_file(path, ax)
    fig.tight_layout()

    if save:
        fig.savefig(save)
    else:
        plt.show()
    return fig


def main(argv=None):
    parser = argparse.ArgumentParser(description="Plot the CSVs exported by `main.py plot-data`.")
    parser.add_argument("paths", nargs="+", help="loss_curve.csv and/or actual_vs_predicted.csv")
    parser.add_argument("--save", help="Write the figure to this file instead of showing it")
    args = parser.parse_args(argv)
    render(args.paths, args.save)
    return 0


if __name__ == "__main__":
    sys.exit(main())
