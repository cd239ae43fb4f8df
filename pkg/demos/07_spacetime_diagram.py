"""Spacetime diagram of one verification round.

Draws worldlines and light-speed messages for an honest round and an attack
round. With matplotlib installed this writes spacetime_diagram.png; without
it, the same segments render as text, matching the CLI's `diagram` output.
"""
from qpvsim import ActorId, Scenario, Scheme, Strategy, run_round

HONEST = Scenario(scheme=Scheme.TELEPORT_MEASURE, rounds=1)
ATTACK = Scenario(scheme=Scheme.TYPE_I, strategy=Strategy.S1_RELABEL_TYPE_I,
                  epr_budget=1, rounds=1)


def segments(scenario):
    """(worldlines, messages) for round 0 of the scenario."""
    trace = run_round(scenario, 0)
    g = scenario.geometry
    t_max = max(r.t for r in trace.records)
    if scenario.strategy is None:
        actors = {ActorId.V1: g.x_v1, ActorId.V2: g.x_v2, ActorId.P: g.x_p}
    else:
        actors = {ActorId.V1: g.x_v1, ActorId.V2: g.x_v2,
                  ActorId.P1: g.x_p1, ActorId.P2: g.x_p2}
    worldlines = [(aid.value, x, 0.0, x, t_max) for aid, x in actors.items()]
    messages = [
        (m.label, m.emit.x, m.emit.t, m.arrive.x, m.arrive.t)
        for m in trace.messages
    ]
    return worldlines, messages


def render_text(title, worldlines, messages):
    print(f"== {title} ==")
    for name, x0, t0, x1, t1 in worldlines:
        print(f"  worldline {name}: x = {x0} from t = {t0} to t = {t1:.2f}")
    for label, x0, t0, x1, t1 in messages:
        print(f"  message {label}: ({x0:.2f}, {t0:.2f}) -> ({x1:.2f}, {t1:.2f})")
    print()


def render_png(panels, path="spacetime_diagram.png"):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, len(panels), figsize=(6 * len(panels), 5))
    for ax, (title, worldlines, messages) in zip(axes, panels):
        for name, x0, t0, x1, t1 in worldlines:
            ax.plot([x0, x1], [t0, t1], color="black", lw=1.5)
            ax.annotate(name, (x0, t1), textcoords="offset points",
                        xytext=(0, 4), ha="center")
        for label, x0, t0, x1, t1 in messages:
            ax.annotate("", xy=(x1, t1), xytext=(x0, t0),
                        arrowprops=dict(arrowstyle="->", color="tab:blue", lw=1))
            ax.annotate(label, ((x0 + x1) / 2, (t0 + t1) / 2), fontsize=7,
                        color="tab:blue", ha="center")
        ax.set_title(title)
        ax.set_xlabel("x")
        ax.set_ylabel("t")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    print(f"wrote {path}")


panels = [
    ("honest teleport round", *segments(HONEST)),
    ("relabeling attack round", *segments(ATTACK)),
]

try:
    import matplotlib  # noqa: F401
except ImportError:
    for panel in panels:
        render_text(*panel)
else:
    render_png(panels)
