"""Command-line front end.

Every subcommand is manifest driven and deterministic given its config,
inputs and seed. Per-file failures are logged and counted; the exit code
is non-zero if any file failed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import augment as aug
from .audio import load_wav, save_wav, trim_or_pad
from .backend import GaussianScorer, pool
from .config import PipelineConfig, load_config
from .exceptions import SpoofkitError
from .features import dump_features, load_features
from .features.matrix import config_digest
from .forge import SpliceMode, SplicePlan, splice, write_labels
from .fusion import Subsystem, greedy_fuse, znorm
from .io import read_key, read_manifest, read_scores, write_manifest, write_scores
from .metrics import compute_eer, det_points

log = logging.getLogger("spoofkit")


def _config(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    return cfg.with_overrides(seed=args.seed)


def _out_dir(args, cfg: PipelineConfig) -> Path:
    out = Path(args.out or cfg.output_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _run_all(fn, items, jobs: int):
    """Apply ``fn`` to each item; results keep input order. Exceptions become results."""
    def safe(item):
        try:
            return fn(item)
        except (SpoofkitError, OSError, ValueError) as exc:
            return exc

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool_:
            return list(pool_.map(safe, items))
    return [safe(item) for item in items]


def _report_failures(ids, results) -> int:
    failed = 0
    for u, r in zip(ids, results):
        if isinstance(r, Exception):
            log.error("%s: %s", u, r)
            failed += 1
    if failed:
        log.error("%d of %d file(s) failed", failed, len(ids))
    return 1 if failed else 0


def _wav_list(directory: str) -> list[Path]:
    if not directory:
        return []
    return sorted(Path(directory).glob("*.wav"))


def cmd_extract(args) -> int:
    cfg = _config(args)
    out = _out_dir(args, cfg)
    extractor = cfg.extractor().fit()
    trim = cfg.trim_mode()
    rows = read_manifest(args.manifest, cfg.corpus_dir or None)

    def one(row):
        utt, path = row
        audio = load_wav(path, require_rate=cfg.sample_rate)
        if trim is not None:
            audio = trim_or_pad(audio, trim)
        feat = extractor.extract(audio)
        dump_features(feat, out / f"{utt}.adsf")
        return feat

    results = _run_all(one, rows, args.jobs)
    done = []
    for (utt, _), r in zip(rows, results):
        if not isinstance(r, Exception):
            print(f"{utt}\t{r.kind.name}\t{r.frames}x{r.dims}")
            done.append((utt, f"{utt}.adsf"))
    write_manifest(done, out / "features.tsv")
    return _report_failures([u for u, _ in rows], results)


def cmd_augment(args) -> int:
    cfg = _config(args)
    out = _out_dir(args, cfg)
    kinds = cfg.augment_kinds()
    if not kinds:
        log.error("config lists no augmentation kinds")
        return 2
    noises = {aug.AugmentKind.Noise: _wav_list(cfg.noise_dir), aug.AugmentKind.Music: _wav_list(cfg.music_dir)}
    rirs = _wav_list(cfg.rir_dir)
    rows = read_manifest(args.manifest, cfg.corpus_dir or None)
    jobs = [(utt, path, kind) for utt, path in rows for kind in kinds]

    def one(job):
        utt, path, kind = job
        out_id = f"{utt}-{kind.value}"
        rng = np.random.default_rng(aug.file_seed(cfg.seed, out_id))
        audio = load_wav(path, require_rate=cfg.sample_rate)
        if kind in noises:
            if not noises[kind]:
                raise SpoofkitError(f"no {kind.value} recordings configured")
            snr = float(rng.uniform(*cfg.snr_range(kind)))
            src = noises[kind][int(rng.integers(len(noises[kind])))]
            noise = load_wav(src, require_rate=cfg.sample_rate)
            result = aug.mix_at_snr(audio, noise, snr, int(rng.integers(2**63)))
            param = f"{snr!r}@{src.stem}"
        elif kind is aug.AugmentKind.WhiteNoise:
            snr = float(rng.uniform(*cfg.snr_range(kind)))
            result = aug.white_noise_at_snr(audio, snr, int(rng.integers(2**63)))
            param = repr(snr)
        elif kind is aug.AugmentKind.Reverb:
            if not rirs:
                raise SpoofkitError("no impulse responses configured")
            src = rirs[int(rng.integers(len(rirs)))]
            result = aug.convolve_rir(audio, load_wav(src, require_rate=cfg.sample_rate))
            param = src.stem
        else:
            result = aug.fade(audio, cfg.fade_in_frac, cfg.fade_out_frac)
            param = f"{cfg.fade_in_frac!r},{cfg.fade_out_frac!r}"
        save_wav(result, out / f"{out_id}.wav")
        return (out_id, utt, kind.value, param)

    results = _run_all(one, jobs, args.jobs)
    write_manifest([r for r in results if not isinstance(r, Exception)], out / "augment.tsv")
    return _report_failures([f"{u}-{k.value}" for u, _, k in jobs], results)


def cmd_pfgen(args) -> int:
    cfg = _config(args)
    out = _out_dir(args, cfg)
    hosts = read_manifest(args.manifest, cfg.corpus_dir or None)
    inserts = read_manifest(args.insert_manifest, cfg.corpus_dir or None)
    if not inserts:
        log.error("insert manifest is empty")
        return 2
    mode = SpliceMode(cfg.pf_mode)

    def one(row):
        host_id, host_path = row
        rng = np.random.default_rng(aug.file_seed(cfg.seed, host_id))
        ins_id, ins_path = inserts[int(rng.integers(len(inserts)))]
        host = load_wav(host_path, require_rate=cfg.sample_rate)
        ins = load_wav(ins_path, require_rate=cfg.sample_rate)
        L = SplicePlan(mode, 0, 0, cfg.crossfade_ms).crossfade_samples(cfg.sample_rate)
        span = len(ins) if mode is SpliceMode.Substitute else 0
        lo, hi = 2 * L, len(host) - span - 2 * L
        if hi < lo:
            raise SpoofkitError(f"host {host_id} too short for a {len(ins)}-sample splice")
        plan = SplicePlan(mode, int(rng.integers(lo, hi + 1)), span, cfg.crossfade_ms)
        audio, labels = splice(host, ins, plan)
        out_id = f"{host_id}-pf"
        save_wav(audio, out / f"{out_id}.wav")
        write_labels(labels, out / f"{out_id}.lab")
        return (out_id, host_id, ins_id, mode.value, plan.position, plan.length, repr(plan.crossfade_ms))

    results = _run_all(one, hosts, args.jobs)
    write_manifest([r for r in results if not isinstance(r, Exception)], out / "pfgen.tsv")
    return _report_failures([u for u, _ in hosts], results)


def _load_features(manifest, jobs):
    rows = read_manifest(manifest)
    results = _run_all(lambda row: load_features(row[1]), rows, jobs)
    return rows, results


def cmd_train(args) -> int:
    cfg = _config(args)
    out = _out_dir(args, cfg)
    key = read_key(args.key)
    rows, feats = _load_features(args.manifest, args.jobs)
    status = _report_failures([u for u, _ in rows], feats)
    usable = [(u, f) for (u, _), f in zip(rows, feats) if not isinstance(f, Exception) and u in key]
    if not usable:
        log.error("no labelled features to train on")
        return 1
    kinds = {f.kind for _, f in usable}
    if len(kinds) != 1:
        log.error("manifest mixes feature kinds: %s", sorted(k.name for k in kinds))
        return 1
    X = np.vstack([pool(f) for _, f in usable])
    scorer = GaussianScorer(var_floor=cfg.var_floor).fit(X, [key[u] for u, _ in usable])
    path = out / (args.name or "model.txt")
    digest = config_digest(**cfg.extractor().get_params())
    path.write_text(scorer.to_text(kinds.pop(), digest), encoding="utf-8")
    print(f"trained on {len(usable)} utterances -> {path}")
    return status


def cmd_score(args) -> int:
    cfg = _config(args)
    out = _out_dir(args, cfg)
    scorer, kind, _ = GaussianScorer.from_text(Path(args.model).read_text(encoding="utf-8"))
    rows, feats = _load_features(args.manifest, args.jobs)
    scores = {}
    for i, ((u, _), f) in enumerate(zip(rows, feats)):
        if isinstance(f, Exception):
            continue
        if kind is not None and f.kind is not kind:
            feats[i] = SpoofkitError(f"feature kind {f.kind.name}, model expects {kind.name}")
            continue
        scores[u] = float(scorer.decision_function(pool(f)[None, :])[0])
    path = out / (args.name or "scores.txt")
    write_scores(scores, path)
    print(f"scored {len(scores)} utterances -> {path}")
    return _report_failures([u for u, _ in rows], feats)


def cmd_eval(args) -> int:
    scores = read_scores(args.scores)
    key = read_key(args.key)
    eer, thr = compute_eer(scores, key)
    print(f"EER {100 * eer:.2f}% threshold {thr!r}")
    if args.det:
        with open(args.det, "w", encoding="utf-8") as fh:
            fh.write("threshold\tfpr\tfnr\n")
            for t, fpr, fnr in det_points(scores, key):
                fh.write(f"{t!r}\t{fpr!r}\t{fnr!r}\n")
    return 0


def cmd_fuse(args) -> int:
    cfg = _config(args)
    out = _out_dir(args, cfg)
    key = read_key(args.key)
    if args.eval_scores and len(args.eval_scores) != len(args.scores):
        log.error("need one eval score file per dev score file")
        return 2
    subsystems = []
    for i, path in enumerate(args.scores):
        dev = read_scores(path)
        ev = read_scores(args.eval_scores[i]) if args.eval_scores else None
        if args.znorm:
            dev = znorm(dev)
            ev = znorm(ev) if ev is not None else None
        subsystems.append(Subsystem.from_scores(Path(path).stem, dev, key, ev))
    result = greedy_fuse(subsystems, key, mu=args.mu)
    report = result.report()
    (out / "fusion_report.txt").write_text(report, encoding="utf-8")
    write_scores(result.fused_dev, out / "fused_dev.txt")
    if result.fused_eval is not None:
        write_scores(result.fused_eval, out / "fused_eval.txt")
    sys.stdout.write(report)
    print(f"EER {100 * result.eer_dev:.2f}% (dev, fused)")
    return 0


def cmd_synth(args) -> int:
    from .synthetic import write_corpus

    cfg = _config(args)
    out = _out_dir(args, cfg)
    splits = write_corpus(out, n_per_class=args.n, seed=cfg.seed, duration_s=args.duration,
                          sample_rate=cfg.sample_rate)
    for split, (manifest, key) in splits.items():
        print(f"{split}\t{manifest}\t{key}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spoofkit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="key = value pipeline config")
        p.add_argument("--out", help="output directory")
        p.add_argument("--jobs", type=int, default=1, help="parallel file workers")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.set_defaults(func=fn)
        return p

    p = add("extract", cmd_extract, "extract features to ADSF files")
    p.add_argument("--manifest", required=True)
    p = add("augment", cmd_augment, "write augmented copies of each input")
    p.add_argument("--manifest", required=True)
    p = add("pfgen", cmd_pfgen, "forge partially-fake utterances with labels")
    p.add_argument("--manifest", required=True, help="host utterances")
    p.add_argument("--insert-manifest", required=True, help="segments to splice in")
    p = add("train", cmd_train, "fit a Gaussian scorer on pooled features")
    p.add_argument("--manifest", required=True, help="feature manifest (utt, .adsf path)")
    p.add_argument("--key", required=True)
    p.add_argument("--name", help="model file name inside --out")
    p = add("score", cmd_score, "score pooled features with a trained model")
    p.add_argument("--manifest", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--name", help="score file name inside --out")
    p = add("eval", cmd_eval, "compute the EER of a score file")
    p.add_argument("--scores", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--det", help="write (threshold, fpr, fnr) operating points here")
    p = add("fuse", cmd_fuse, "greedy fusion of subsystem score files")
    p.add_argument("--scores", nargs="+", required=True, help="dev-set score file per subsystem")
    p.add_argument("--eval-scores", nargs="+", help="held-out score files, same order")
    p.add_argument("--key", required=True, help="dev-set trial key")
    p.add_argument("--mu", type=float, default=0.9)
    p.add_argument("--znorm", action="store_true")
    p = add("synth", cmd_synth, "write a synthetic genuine/fake corpus")
    p.add_argument("--n", type=int, default=400, help="utterances per class")
    p.add_argument("--duration", type=float, default=3.0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SpoofkitError as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
