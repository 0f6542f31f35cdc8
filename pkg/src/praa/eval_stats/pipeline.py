"""End-to-end run: impute, select features, cross-validate the ADTree, pool scores."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..adtree import DEFAULT_ITERATIONS, AdTree, extract_rules, score, train_adtree
from ..dataset import Dataset
from ..imputer import ImputationReport, impute_dataset, knni_impute
from ..pso_select import SelectionResult, SwarmConfig, adtree_fitness, run_selection
from .folds import stratified_folds
from .metrics import MetricsReport, confusion_metrics, roc_auc

# sub-seed offsets derived from the single run seed
SWARM_SEED_OFFSET = 1
FITNESS_FOLD_SEED_OFFSET = 2


@dataclass(frozen=True)
class PipelineConfig:
    folds: int = 10
    fitness_folds: int = 10
    adt_iterations: int = DEFAULT_ITERATIONS
    swarm: SwarmConfig = SwarmConfig()
    seed: int = 0
    nested: bool = False
    cross_real_sets: str = "paper"
    positive_label: str | None = None
    impute_method: str = "praa"
    knn_k: int = 5


@dataclass
class PipelineReport:
    metrics: MetricsReport
    selection: SelectionResult
    selected: list
    tree: AdTree
    rules: list
    imputation: ImputationReport
    imputed: Dataset
    scores: list
    labels: list
    positive: str
    fold_masks: list = field(default_factory=list)

    def render(self) -> str:
        lines = [self.metrics.render().rstrip("\n")]
        lines.append(f"positive label {self.positive}")
        lines.append(f"selected features ({len(self.selected)}): {', '.join(self.selected)}")
        lines.append(f"selection fitness {self.selection.fitness:.6g}")
        lines.append(f"imputed cells {self.imputation.total}")
        lines.append("rules:")
        lines += ["  " + r.render() for r in self.rules]
        return "\n".join(lines) + "\n"


def impute(dataset: Dataset, config: PipelineConfig):
    if config.impute_method == "knni":
        return knni_impute(dataset, config.knn_k, config.cross_real_sets)
    if config.impute_method != "praa":
        raise ValueError(f"unknown imputation method {config.impute_method!r}")
    return impute_dataset(dataset, config.cross_real_sets)


def select_features(dataset: Dataset, config: PipelineConfig) -> SelectionResult:
    """PSO selection with sub-seeds derived from the run seed."""
    swarm = SwarmConfig(
        config.swarm.particles, config.swarm.iterations, config.swarm.c1,
        config.swarm.c2, config.swarm.vmax, config.seed + SWARM_SEED_OFFSET,
    )
    fit = adtree_fitness(dataset, config.fitness_folds, config.adt_iterations, config.seed + FITNESS_FOLD_SEED_OFFSET)
    return run_selection(dataset, swarm, fit)


def label_order(dataset: Dataset, positive: str | None):
    if positive is None:
        return dataset.labels
    if positive not in dataset.labels:
        raise ValueError(f"positive label {positive!r} not among {dataset.labels}")
    return (positive,) + tuple(lab for lab in dataset.labels if lab != positive)


def run_praa_pipeline(dataset: Dataset, config: PipelineConfig = PipelineConfig()) -> PipelineReport:
    labels = label_order(dataset, config.positive_label)
    imputed, imp_report = impute(dataset, config)
    selection = select_features(imputed, config)
    features = [j for j, b in enumerate(selection.mask) if b]

    plan = stratified_folds(imputed, config.folds, config.seed)
    pooled_scores, pooled_labels, predicted = [], [], []
    fold_masks = []
    for train, test in plan:
        train_ds = imputed.subset_rows(train)
        fold_features = features
        if config.nested:
            fold_sel = select_features(train_ds, config)
            fold_features = [j for j, b in enumerate(fold_sel.mask) if b]
            fold_masks.append(fold_sel.mask)
        if not fold_features:
            fold_features = list(range(imputed.n_features))
        tree = train_adtree(train_ds, config.adt_iterations, fold_features, labels=labels)
        for i in test:
            margin = score(tree, imputed.rows[i])
            pooled_scores.append(margin.score)
            pooled_labels.append(imputed.rows[i][-1])
            predicted.append(margin.label)

    metrics = confusion_metrics(pooled_labels, predicted, labels[0])
    metrics = metrics.with_auc(roc_auc(pooled_scores, pooled_labels, labels[0]))
    final_features = features or list(range(imputed.n_features))
    tree = train_adtree(imputed, config.adt_iterations, final_features, labels=labels)
    return PipelineReport(
        metrics=metrics,
        selection=selection,
        selected=[imputed.feature_names[j] for j in features],
        tree=tree,
        rules=extract_rules(tree),
        imputation=imp_report,
        imputed=imputed,
        scores=pooled_scores,
        labels=pooled_labels,
        positive=labels[0],
        fold_masks=fold_masks,
    )

