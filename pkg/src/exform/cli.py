"""
Command-line surface over the whole workbench: structural validation,
information sets, well-posedness, outcomes, equilibrium verification,
tilting limits, the timing race, lattice completions, and the registry
of bundled instances.

Exit codes: 0 on success, 1 on a failed check (with witnesses), 2 on
malformed input.  All rationals print as "num/den"; floats appear only
in human-readable simulation summaries.
"""

import json as jsonlib
from fractions import Fraction

import click

from . import equil, instances, order, play, sef as sefmod, tilt, timing
from ._util import format_rational, parse_rational
from .errors import ExformError, InputError, StructureError, UnknownExample
from .forest import DecisionForest
from .sdf import RandomMove, StochasticDecisionForest
from .sef import StochasticExtensiveForm
from .vtime import format_vtime, parse_ordinal, parse_vtime

EXAMPLES = {
    "simple": "two-period single-agent form with forgetful information",
    "simple-variant": "the same outcomes under a coarser node family",
    "amd": "two-agent exit/continue race over signal atoms",
    "mp-case1": "coin matching, split second-mover information",
    "mp-case2": "coin matching, merged information, coin hidden",
    "mp-case3": "coin matching, merged information, coin shown",
    "mp-case4": "coin matching, split information, coin shown to one side",
    "ultimatum": "take-it-or-leave-it split with acceptance response",
}


# --- instance serialization ---------------------------------------------------

def serialize_sef(form):
    """A canonical JSON-ready document for a validated extensive form."""
    outcomes = sorted(form.sdf.forest.outcomes)
    if not all(isinstance(w, str) for w in outcomes):
        raise InputError("only string-labelled outcomes serialize")
    nodes = sorted(form.sdf.forest.nodes, key=sorted)
    node_key = {x: k for k, x in enumerate(nodes)}

    def move_doc(m):
        # scenario labels are unique per graph, so this order is canonical
        return sorted([w, node_key[x]] for w, x in m.graph)

    moves = sorted(form.sdf.random_moves, key=move_doc)
    move_key = {m: k for k, m in enumerate(moves)}

    def choice_list(cs):
        return sorted((sorted(c) for c in cs))

    doc = {
        "outcomes": outcomes,
        "nodes": [sorted(x) for x in nodes],
        "scenarios": sorted(form.sdf.scenarios),
        "projection": [form.sdf.projection[x] for x in nodes],
        "random_moves": [move_doc(m) for m in moves],
        "agents": [str(i) for i in form.agents],
        "agent_moves": {str(i): sorted(move_key[m] for m in form.agent_moves[i])
                        for i in form.agents},
        "info": {str(i): {str(move_key[m]): sorted(sorted(e) for e in part)
                          for m, part in form.info[i].items()}
                 for i in form.agents},
        "refchoices": {str(i): {str(move_key[m]): choice_list(cs)
                                for m, cs in form.refchoices[i].items()}
                       for i in form.agents},
        "choices": {str(i): choice_list(form.choices[i]) for i in form.agents},
    }
    return doc


def parse_sef(doc):
    """Rebuild (and re-validate) an extensive form from its document."""
    try:
        nodes = [frozenset(x) for x in doc["nodes"]]
        moves = [RandomMove({w: nodes[k] for w, k in graph})
                 for graph in doc["random_moves"]]
        sdf = StochasticDecisionForest(
            DecisionForest(doc["outcomes"], nodes),
            doc["scenarios"],
            dict(zip(nodes, doc["projection"])),
            moves)
        agents = list(doc["agents"])
        agent_moves = {i: frozenset(moves[k] for k in doc["agent_moves"][i])
                       for i in agents}
        info = {i: {moves[int(k)]: frozenset(frozenset(e) for e in part)
                    for k, part in doc["info"][i].items()}
                for i in agents}
        refchoices = {i: {moves[int(k)]: tuple(frozenset(c) for c in cs)
                          for k, cs in doc["refchoices"][i].items()}
                      for i in agents}
        choices = {i: frozenset(frozenset(c) for c in doc["choices"][i])
                   for i in agents}
    except (KeyError, TypeError, IndexError, ValueError) as err:
        raise InputError(f"malformed form document: {err}") from err
    return StochasticExtensiveForm(sdf, agents, agent_moves, info,
                                   refchoices, choices)


def load_instance(ref):
    """
    Resolve an instance reference: "examples:<name>" gives the bundled
    form with its expected-utility layer and profile; a file path gives a
    serialized form alone.
    """
    if ref.startswith("examples:"):
        form, eu, profile, expected = equil.load_example(ref[len("examples:"):])
        return form, eu, profile, expected
    try:
        with open(ref, encoding="utf-8") as handle:
            doc = jsonlib.load(handle)
    except OSError as err:
        raise InputError(f"cannot read {ref}: {err}") from err
    except jsonlib.JSONDecodeError as err:
        raise InputError(f"not a JSON document: {err}") from err
    return parse_sef(doc), None, None, None


# --- output plumbing ----------------------------------------------------------

def emit(as_json, human, data):
    if as_json:
        click.echo(jsonlib.dumps(data, sort_keys=True, separators=(", ", ": ")))
    else:
        click.echo(human)


def json_flag(command):
    return click.option("--json", "as_json", is_flag=True,
                        help="machine-readable output")(command)


def guarded(command):
    """Map malformed input to exit code 2 instead of a traceback."""

    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (InputError, UnknownExample) as err:
            click.echo(f"input error: {err}", err=True)
            raise SystemExit(2)
        except ExformError as err:
            click.echo(f"check failed: {err}", err=True)
            raise SystemExit(1)

    wrapper.__name__ = command.__name__
    wrapper.__doc__ = command.__doc__
    return wrapper


@click.group()
def cli():
    """Workbench for stochastic forms, tilting limits, and timing races."""


def main():
    cli(prog_name="exform")


# --- structural subcommands ---------------------------------------------------

@cli.command()
@click.option("--sef", "ref", required=True, help="instance reference")
@json_flag
@guarded
def validate(ref, as_json):
    """Validate a form and report its recall and information flags."""
    try:
        form, _, _, _ = load_instance(ref)
    except StructureError as err:
        emit(as_json, f"invalid SEF: {err}", {"valid": False, "witness": str(err)})
        raise SystemExit(1)
    flags = [sefmod.check_recall_and_info(form, i) for i in form.agents]
    recall = all(f["endogenous_recall"] and f["exogenous_recall"] for f in flags)
    perfect = all(f["perfect_endogenous_info"] and f["perfect_exogenous_info"]
                  for f in flags)
    human = (f"valid SEF, {'perfect' if recall else 'imperfect'} recall, "
             f"{'perfect' if perfect else 'imperfect'} information")
    emit(as_json, human, {
        "valid": True,
        "perfect_recall": recall,
        "perfect_information": perfect,
        "agents": [str(i) for i in form.agents],
        "flags": {str(i): f for i, f in zip(form.agents, flags)},
    })


@cli.command()
@click.option("--sef", "ref", required=True)
@json_flag
@guarded
def infosets(ref, as_json):
    """List every agent's information sets."""
    form, _, _, _ = load_instance(ref)
    lines, data = [], {}
    for i in form.agents:
        sets, preds = sefmod.info_sets(form, i)
        data[str(i)] = [{"members": len(p.random_moves),
                         "moves": len(preds[p]),
                         "menu": len(form.available_at(i, next(iter(p.random_moves))))}
                        for p in sets]
        lines.append(f"agent {i}: {len(sets)} information set(s)")
        for k, p in enumerate(sets):
            lines.append(f"  set {k}: {len(p.random_moves)} member(s), "
                         f"{len(preds[p])} move(s)")
    emit(as_json, "\n".join(lines), data)


@cli.command()
@click.option("--sef", "ref", required=True)
@click.option("--method", type=click.Choice(["direct", "order", "both"]),
              default="both")
@json_flag
@guarded
def wellposed(ref, as_json, method):
    """Check that every profile induces exactly one outcome everywhere."""
    form, _, _, _ = load_instance(ref)
    data, ok = {}, True
    if method in ("direct", "both"):
        report = play.check_wellposed_direct(form)
        data["direct"] = {"attainable": report.attainable,
                          "existence": report.existence,
                          "uniqueness": report.uniqueness,
                          "witnesses": {k: repr(v) for k, v
                                        in report.witnesses.items()}}
        ok = ok and bool(report)
    if method in ("order", "both"):
        data["order"] = play.check_wellposed_order(form)
        ok = ok and data["order"]
    human = "well-posed" if ok else f"not well-posed: {data}"
    emit(as_json, human, {"well_posed": ok, **data})
    if not ok:
        raise SystemExit(1)


@cli.command()
@click.option("--sef", "ref", required=True)
@json_flag
@guarded
def outcome(ref, as_json):
    """Play the bundled profile and print the outcome per scenario."""
    form, _, profile, _ = load_instance(ref)
    if profile is None:
        raise InputError("outcome needs a bundled instance with a profile")
    tables = play.profile_tables(form, profile)
    played = {w: play.outcome_from(form, tables, form.sdf.root_of(w))
              for w in sorted(form.sdf.scenarios)}
    human = "\n".join(f"{w} -> {x}" for w, x in played.items())
    emit(as_json, human, {str(w): str(x) for w, x in played.items()})


# --- equilibrium --------------------------------------------------------------

@cli.group()
def equilibrium():
    """Equilibrium checks on bundled instances."""


@equilibrium.command()
@click.option("--sef", "ref", required=True)
@click.option("--p", "lean", default=None, help="first-mover bias override")
@json_flag
@guarded
def verify(ref, as_json, lean):
    """Verify consistency and rationality of the bundled profile."""
    if lean is not None:
        if ref != "examples:amd":
            raise InputError("--p only applies to examples:amd")
        form, eu, profile, _ = equil.amd_instance(parse_rational(lean))
    else:
        form, eu, profile, _ = load_instance(ref)
        if profile is None:
            raise InputError("equilibrium needs a bundled instance")
    report = equil.verify_equilibrium(form, eu, profile)
    values = sorted({v for blocks in report.rationality.payoffs.values()
                     for v in blocks.values()})
    payoff_text = ", ".join(format_rational(v) for v in values)
    data = {
        "equilibrium": report.in_equilibrium,
        "consistent": report.consistency.consistent,
        "rational": report.rationality.rational,
        "payoffs": [format_rational(v) for v in values],
        "witnesses": [repr(w) for w in report.rationality.witnesses],
    }
    if report.in_equilibrium:
        emit(as_json, f"equilibrium verified, payoff {payoff_text}", data)
    else:
        better = sorted({format_rational(w[5])
                         for w in report.rationality.witnesses})
        emit(as_json,
             f"not an equilibrium; payoff {payoff_text}; "
             f"deviations reach {', '.join(better)}", data)
        raise SystemExit(1)


# --- tilting ------------------------------------------------------------------

def _parse_kappa(text):
    if text.startswith("alt:"):
        try:
            low, high = (parse_ordinal(part) for part in text[4:].split(","))
        except ValueError as err:
            raise InputError(f"bad alternation spec: {text!r}") from err
        return lambda n: high if n % 2 == 0 else low
    value = parse_ordinal(text)
    return lambda n: value


def _parse_window(text):
    try:
        start, stop, tail = (int(x) for x in text.split(":"))
    except ValueError as err:
        raise InputError(f"bad window spec: {text!r}") from err
    return tilt.Window(start, stop, tail)


@cli.command(name="tilt")
@click.option("--family", type=click.Choice(sorted(tilt.REGISTERED)),
              required=True)
@click.option("--kappa", required=True,
              help="stop index: an ordinal or alt:<odd>,<even>")
@click.option("--probe", default=None, help='";"-separated probe points')
@click.option("--window", default="4:24:8", help="start:stop:tail")
@json_flag
@guarded
def tilt_command(family, kappa, probe, window, as_json):
    """Tilt a stop-index family through a registered grid family."""
    grids = tilt.REGISTERED[family]()
    process = tilt.StopIndexFamily(kappa=_parse_kappa(kappa), label=kappa)
    probes = ([parse_vtime(p) for p in probe.split(";")] if probe else None)
    result = tilt.tilting_limit(process, grids, probes=probes,
                                window=_parse_window(window))
    win = f"{result.window.start}:{result.window.stop}:{result.window.tail}"
    if result.converged:
        stop = format_vtime(result.stop) if result.stop is not None else None
        human = (f"Limit 1[0, {stop}) (window {win})" if stop
                 else f"Limit value table (window {win})")
        emit(as_json, human, {
            "converged": True, "stop": stop, "window": win,
            "table": {format_vtime(p): v for p, v in result.table.items()}})
    else:
        witness_probe, values = result.witness
        emit(as_json,
             f"Diverged at {format_vtime(witness_probe)}: "
             f"{list(values)} (window {win})",
             {"converged": False, "at": format_vtime(witness_probe),
              "values": list(values), "window": win})
        raise SystemExit(1)


# --- timing -------------------------------------------------------------------

def _parse_deviation(text):
    if text == "never":
        return timing.NeverBelowOmega()
    if text == "prewhistle":
        return timing.PreWhistleStop()
    if text.startswith("level:"):
        try:
            return timing.PureLevel(int(text[len("level:"):]))
        except ValueError as err:
            raise InputError(f"bad deviation level: {text!r}") from err
    raise InputError(f"unknown deviation: {text!r}")


@cli.command(name="timing-sim")
@click.option("--eta", default="1")
@click.option("--whistle", default="0")
@click.option("--trials", default=0, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--deviation", default=None,
              help="level:<m>, never, or prewhistle")
@click.option("--grid-n", "grid_n", default=None, type=int)
@json_flag
@guarded
def timing_sim(eta, whistle, trials, seed, deviation, grid_n, as_json):
    """Run the preemption race: exact distribution plus Monte Carlo."""
    config = timing.TimingConfig(eta=parse_rational(eta),
                                 whistle=parse_rational(whistle),
                                 trials=trials, seed=seed)
    exact = timing.outcome_distribution(config.eta)
    data = {"eta": format_rational(config.eta),
            "whistle": format_rational(config.whistle),
            "distribution": {cls.value: format_rational(p)
                             for cls, p in exact.items()}}
    lines = ["exact distribution: "
             + ", ".join(f"{cls.value}={format_rational(p)}"
                         for cls, p in exact.items())]
    if trials:
        stats = timing.monte_carlo(config)
        data["counts"] = {cls.value: k for cls, k in stats.counts.items()}
        data["frequencies"] = {cls.value: format_rational(p)
                               for cls, p in stats.probabilities.items()}
        data["mean_payoffs"] = [format_rational(m) for m in stats.mean_payoffs]
        lines.append(f"{trials} trials, seed {seed}:")
        for cls, k in sorted(stats.counts.items(), key=lambda kv: kv[0].value):
            if k or cls in exact:
                radius = stats.radii[cls]
                lines.append(f"  {cls.value}: {k} "
                             f"(freq {float(stats.probabilities[cls]):.4f} "
                             f"+- {radius:.4f})")
        means = ", ".join(f"{float(m):+.4f}" for m in stats.mean_payoffs)
        lines.append(f"  mean payoffs: {means}")
    if deviation is not None:
        value = timing.deviation_payoff(config, _parse_deviation(deviation))
        data["deviation_payoff"] = format_rational(value)
        lines.append(f"deviation payoff: {format_rational(value)}")
    if grid_n is not None:
        approx = timing.grid_approximant(config, grid_n)
        data["grid"] = {"mesh": format_rational(approx.mesh)}
        lines.append(f"grid approximant: mesh {format_rational(approx.mesh)}")
    emit(as_json, "\n".join(lines), data)


# --- completions --------------------------------------------------------------

def _closure(elements, pairs):
    leq = {(x, x) for x in elements} | {tuple(p) for p in pairs}
    changed = True
    while changed:
        changed = False
        for (a, b) in list(leq):
            for (c, d) in list(leq):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    return leq


@cli.command()
@click.option("--poset", "path", required=True, type=click.Path())
@json_flag
@guarded
def dm(path, as_json):
    """Complete a finite poset into its smallest complete lattice."""
    try:
        with open(path, encoding="utf-8") as handle:
            doc = jsonlib.load(handle)
        elements, pairs = doc["elements"], doc["leq"]
    except (OSError, jsonlib.JSONDecodeError, KeyError, TypeError) as err:
        raise InputError(f"cannot read poset: {err}") from err
    poset = order.Poset(elements, _closure(elements, pairs))
    lattice, phi = order.dm_completion(poset)
    dense = order.check_dense_completion(poset, lattice, phi)
    data = {"elements": len(poset.elements),
            "completion": len(lattice.elements),
            "complete_lattice": order.is_complete_lattice(lattice),
            "dense_embedding": bool(dense)}
    emit(as_json,
         f"completion of {data['elements']} element(s) has "
         f"{data['completion']} element(s); complete lattice: "
         f"{data['complete_lattice']}; dense embedding: "
         f"{data['dense_embedding']}", data)
    if not (data["complete_lattice"] and data["dense_embedding"]):
        raise SystemExit(1)


# --- registry -----------------------------------------------------------------

def examples_list():
    registry = {}
    for name, description in EXAMPLES.items():
        _, _, _, expected = equil.load_example(name)
        registry[name] = {
            "description": description,
            "equilibrium": expected["equilibrium"],
            "payoffs": {str(k): format_rational(v)
                        for k, v in expected["payoffs"].items()},
        }
    return registry


@cli.command()
@json_flag
@guarded
def examples(as_json):
    """List the bundled instances with their expected verdicts."""
    registry = examples_list()
    lines = []
    for name, entry in registry.items():
        payoffs = ", ".join(f"{k}={v}" for k, v in entry["payoffs"].items())
        verdict = "equilibrium" if entry["equilibrium"] else "no equilibrium"
        lines.append(f"{name}: {entry['description']} ({verdict}; {payoffs})")
    emit(as_json, "\n".join(lines), registry)
