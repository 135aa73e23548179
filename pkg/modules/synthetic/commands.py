from core.routing import CommandRouter
from .services import generate_corpus, write_corpus

router = CommandRouter(tags=["synthetic"])


@router.command(
    "synth",
    help="write a synthetic corpus with planted model effects",
    flags=("seed", "campaigns"),
)
def cmd_synth(config, manifest):
    corpus = generate_corpus(config.synth_campaigns, config.seed)
    for path in write_corpus(corpus, config.output_dir).values():
        manifest.add_output(path)
    manifest.count("campaigns", len(corpus.records))
