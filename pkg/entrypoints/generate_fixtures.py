import logging
from pathlib import Path

from simnet.fixtures import write_fixtures
from simnet.io.files import load_joint, load_model
from simnet.similarity.network import validate_similarity_network

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(levelname)s - %(message)s",
)

OUTPUT_DIR = Path(__file__).resolve().parents[1] / "fixtures"

if __name__ == "__main__":
    written = write_fixtures(OUTPUT_DIR)

    # Reload everything so a broken writer fails here rather than in the tests
    for path in written:
        if path.name.endswith("-joint.json"):
            table = load_joint(path)
            logging.info(f"{path.name}: joint over {list(table.names)}")
            continue
        report = validate_similarity_network(load_model(path))
        if not report.ok:
            logging.error(f"{path.name}: {report.kinds()}")
            exit(1)
        logging.info(f"{path.name}: valid")
