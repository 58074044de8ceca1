#!/usr/bin/env python3
"""Regenerate the bundled reference suite under reference/.

The reference registry mirrors the 35-repository benchmark layout
(metadata only, no sources); the task files carry 336 single-repo and
186 multi-repo entries with the published per-domain distribution.
Output is deterministic for a fixed seed so the files can be committed.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

SEED = 20260810
OUT = Path(__file__).resolve().parents[1] / "reference"

# repo_id -> (domain, [(skill name, description, tags)])
REPOS: dict[str, tuple[str, list[tuple[str, str, list[str]]]]] = {
    # Document and web parsing with OCR
    "tesseract": ("document_web_parsing", [
        ("ocr page text", "Recognize printed text on a scanned page image and emit plain text.", ["ocr", "image", "text"]),
        ("ocr searchable pdf", "Convert a scanned document into a searchable PDF with an embedded text layer.", ["ocr", "pdf"]),
        ("ocr language selection", "Run text recognition with an explicit language model selection.", ["ocr", "multilingual"]),
        ("ocr tsv output", "Emit word-level recognition results with bounding boxes as TSV.", ["ocr", "layout"]),
    ]),
    "easyocr": ("document_web_parsing", [
        ("scene text detection", "Detect and read text regions in natural-scene photographs.", ["ocr", "detection"]),
        ("multilingual ocr", "Recognize text in dozens of scripts without per-language setup.", ["ocr", "multilingual"]),
        ("ocr confidence scores", "Return recognized strings together with per-region confidence scores.", ["ocr", "confidence"]),
        ("ocr region crop", "Read the text inside a caller-specified rectangular image region.", ["ocr", "crop"]),
    ]),
    "textract": ("document_web_parsing", [
        ("any document to text", "Extract plain text from heterogeneous document formats through one interface.", ["document", "extraction"]),
        ("docx text extraction", "Pull the body text out of a Word document.", ["docx", "text"]),
        ("pdf text extraction", "Extract the text stream of a PDF file.", ["pdf", "text"]),
        ("audio transcript passthrough", "Obtain text for audio attachments via pluggable speech engines.", ["audio", "text"]),
    ]),
    "tika-python": ("document_web_parsing", [
        ("document metadata extraction", "Extract author, dates and format metadata from a document.", ["metadata", "document"]),
        ("document body parsing", "Parse a document into plain body text via the Tika service.", ["parsing", "text"]),
        ("content type detection", "Detect the MIME content type of an arbitrary file.", ["mime", "detection"]),
        ("batch document parsing", "Parse a folder of mixed documents into text records.", ["batch", "parsing"]),
    ]),
    "camelot": ("document_web_parsing", [
        ("pdf table extraction", "Extract tables from PDF pages into structured data frames.", ["pdf", "table"]),
        ("table to csv export", "Write extracted PDF tables to CSV files.", ["table", "csv"]),
        ("lattice table parsing", "Parse ruled tables using cell border detection.", ["table", "lattice"]),
        ("table accuracy report", "Report parsing accuracy and whitespace metrics per table.", ["table", "metrics"]),
    ]),
    "python-docx2txt": ("document_web_parsing", [
        ("docx to text", "Convert a .docx file to plain text.", ["docx", "text"]),
        ("docx image extraction", "Extract the embedded images of a .docx file into a folder.", ["docx", "images"]),
        ("docx header footer text", "Include header and footer content in the extracted text.", ["docx", "layout"]),
        ("batch docx conversion", "Convert a folder of .docx files to text files.", ["docx", "batch"]),
    ]),
    "unstructured": ("document_web_parsing", [
        ("document partitioning", "Partition a document into typed elements such as titles and paragraphs.", ["etl", "elements"]),
        ("document chunking", "Chunk parsed elements into retrieval-sized passages.", ["chunking", "rag"]),
        ("html cleaning", "Strip boilerplate and normalize HTML into clean text elements.", ["html", "cleaning"]),
        ("element json export", "Serialize partitioned document elements as structured JSON.", ["json", "export"]),
    ]),
    # Web and platform scraping
    "trafilatura": ("web_scraping", [
        ("main content extraction", "Extract the main article text of a web page, dropping boilerplate.", ["web", "extraction"]),
        ("page metadata extraction", "Collect title, author and date metadata from a web page.", ["web", "metadata"]),
        ("batch url crawling", "Fetch and extract a list of URLs in one batch run.", ["crawl", "batch"]),
        ("xml tei output", "Emit extracted page content as XML-TEI records.", ["xml", "export"]),
    ]),
    "yt-dlp": ("web_scraping", [
        ("video download", "Download a video from a supported platform URL.", ["video", "download"]),
        ("audio only download", "Download and extract the audio track of an online video.", ["audio", "download"]),
        ("format listing", "List the downloadable formats available for a media URL.", ["formats", "inspection"]),
        ("playlist batch download", "Download every entry of a playlist with templated file names.", ["playlist", "batch"]),
    ]),
    "youtube-transcript-api": ("web_scraping", [
        ("caption retrieval", "Fetch the caption track of an online video without an API key.", ["captions", "transcript"]),
        ("auto caption retrieval", "Retrieve automatically generated captions when none are authored.", ["captions", "asr"]),
        ("caption language listing", "List the caption languages available for a video.", ["captions", "languages"]),
        ("transcript formatting", "Format a fetched transcript as plain text or JSON.", ["transcript", "export"]),
    ]),
    "mediacrawler": ("web_scraping", [
        ("platform post crawling", "Collect posts matching a keyword from social platforms.", ["crawl", "social"]),
        ("comment collection", "Collect the comment threads attached to crawled posts.", ["crawl", "comments"]),
        ("creator profile crawling", "Collect the posts of a specific creator account.", ["crawl", "profile"]),
        ("crawl result export", "Persist crawled posts and comments as structured records.", ["export", "json"]),
    ]),
    # Speech and audio
    "speechbrain": ("speech_audio", [
        ("speech recognition", "Transcribe recorded speech to text with pretrained models.", ["asr", "speech"]),
        ("speaker verification", "Decide whether two utterances come from the same speaker.", ["speaker", "verification"]),
        ("speech enhancement", "Denoise a speech recording with a pretrained enhancement model.", ["enhancement", "audio"]),
        ("language identification", "Identify the language spoken in an audio clip.", ["language", "audio"]),
    ]),
    "espnet": ("speech_audio", [
        ("end to end asr", "Run end-to-end speech recognition on an audio file.", ["asr", "speech"]),
        ("text to speech", "Synthesize speech audio from input text.", ["tts", "speech"]),
        ("speech translation", "Translate spoken audio into text of another language.", ["translation", "speech"]),
        ("pretrained model inference", "Run inference with downloadable pretrained speech models.", ["inference", "models"]),
    ]),
    "silero-vad": ("speech_audio", [
        ("voice activity detection", "Mark the speech segments of an audio stream.", ["vad", "audio"]),
        ("speech timestamp export", "Export detected speech segments as timestamped spans.", ["vad", "timestamps"]),
        ("streaming vad", "Detect voice activity on chunked streaming audio.", ["vad", "streaming"]),
        ("silence trimming", "Trim non-speech silence from a recording using detected segments.", ["vad", "trimming"]),
    ]),
    "spleeter": ("speech_audio", [
        ("music source separation", "Separate a music track into vocals and accompaniment stems.", ["separation", "music"]),
        ("multi stem separation", "Split a track into four or five instrument stems.", ["separation", "stems"]),
        ("batch separation", "Separate a folder of audio files in one run.", ["separation", "batch"]),
        ("separation model selection", "Choose the pretrained stem model used for separation.", ["separation", "models"]),
    ]),
    # Vision and video
    "segment-anything": ("vision_video", [
        ("promptable segmentation", "Segment the object indicated by point or box prompts in an image.", ["segmentation", "prompts"]),
        ("automatic mask generation", "Generate masks for every object in an image automatically.", ["segmentation", "masks"]),
        ("mask export", "Export predicted masks as image overlays or RLE records.", ["segmentation", "export"]),
        ("embedding precomputation", "Precompute image embeddings for fast repeated prompting.", ["embeddings", "performance"]),
    ]),
    "ultralytics": ("vision_video", [
        ("object detection", "Detect and box the objects of an image with YOLO models.", ["detection", "yolo"]),
        ("instance segmentation", "Segment object instances with pretrained YOLO segmentation models.", ["segmentation", "yolo"]),
        ("pose estimation", "Estimate human keypoint poses in images or video.", ["pose", "keypoints"]),
        ("detection export", "Export detection results and annotated media to disk.", ["export", "annotation"]),
    ]),
    "animeganv3": ("vision_video", [
        ("photo anime stylization", "Convert a photograph into anime-style artwork.", ["style", "anime"]),
        ("video stylization", "Apply anime stylization frame-by-frame to a video.", ["style", "video"]),
        ("style model selection", "Pick among pretrained stylization models for different looks.", ["style", "models"]),
        ("side by side comparison", "Render the source and stylized images side by side.", ["style", "comparison"]),
    ]),
    "transparent-background": ("vision_video", [
        ("background removal", "Remove the background of an image and emit transparency.", ["matting", "background"]),
        ("batch matting", "Process a folder of images into background-free cutouts.", ["matting", "batch"]),
        ("video background removal", "Remove backgrounds across the frames of a video.", ["matting", "video"]),
        ("background replacement", "Composite cutouts onto a solid color or replacement image.", ["matting", "composite"]),
    ]),
    "old-films-restoration": ("vision_video", [
        ("film restoration", "Restore degraded old film footage with learned models.", ["restoration", "video"]),
        ("scratch removal", "Remove scratches and artifacts from film frames.", ["restoration", "denoise"]),
        ("colorization support", "Prepare restored frames for downstream colorization.", ["restoration", "color"]),
        ("frame interpolation", "Interpolate missing or damaged frames during restoration.", ["restoration", "frames"]),
    ]),
    "pyscenedetect": ("vision_video", [
        ("scene boundary detection", "Detect the shot boundaries of a video.", ["scenes", "video"]),
        ("scene list export", "Export detected scenes as a timestamped CSV list.", ["scenes", "csv"]),
        ("video splitting", "Split a video into per-scene clips.", ["scenes", "split"]),
        ("threshold tuning", "Tune detection thresholds for gradual transitions.", ["scenes", "tuning"]),
    ]),
    "moviepy": ("vision_video", [
        ("video clipping", "Cut a time range out of a video file.", ["editing", "clip"]),
        ("video concatenation", "Concatenate multiple clips into one video.", ["editing", "concat"]),
        ("text overlay", "Render a text overlay onto a video clip.", ["editing", "text"]),
        ("gif export", "Export a clip as an animated GIF.", ["editing", "gif"]),
    ]),
    "ffmpeg-python": ("vision_video", [
        ("media transcoding", "Transcode media files between containers and codecs.", ["ffmpeg", "transcode"]),
        ("filter graph assembly", "Compose complex ffmpeg filter graphs programmatically.", ["ffmpeg", "filters"]),
        ("audio extraction", "Extract the audio track of a video into its own file.", ["ffmpeg", "audio"]),
        ("thumbnail extraction", "Grab representative frames from a video as images.", ["ffmpeg", "frames"]),
    ]),
    "stable-diffusion": ("vision_video", [
        ("text to image generation", "Generate an image from a natural-language prompt.", ["diffusion", "generation"]),
        ("image to image translation", "Rework an input image under a text prompt.", ["diffusion", "img2img"]),
        ("inpainting", "Fill a masked image region consistently with a prompt.", ["diffusion", "inpainting"]),
        ("sampler configuration", "Control sampling steps, guidance and seeds for generation.", ["diffusion", "sampling"]),
    ]),
    # Dev security
    "bandit": ("dev_security", [
        ("python security scan", "Scan Python sources for common insecure patterns.", ["security", "static-analysis"]),
        ("severity filtered report", "Report findings filtered by severity and confidence.", ["security", "report"]),
        ("baseline comparison", "Compare a scan against a stored baseline to find regressions.", ["security", "baseline"]),
    ]),
    "trufflehog": ("dev_security", [
        ("secret detection", "Find leaked credentials in repositories and file trees.", ["secrets", "scan"]),
        ("history scanning", "Scan the full commit history for committed secrets.", ["secrets", "git"]),
        ("secret verification", "Verify candidate secrets against their issuing services.", ["secrets", "verification"]),
    ]),
    "sqlmap": ("dev_security", [
        ("sql injection detection", "Probe a target URL for SQL injection vulnerabilities.", ["sqli", "scan"]),
        ("database enumeration", "Enumerate databases and tables through a confirmed injection.", ["sqli", "enumeration"]),
        ("injection technique selection", "Select and tune the injection techniques attempted.", ["sqli", "tuning"]),
    ]),
    "bolt": ("dev_security", [
        ("csrf scanning", "Crawl a site and flag forms lacking CSRF protection.", ["csrf", "scan"]),
        ("token entropy analysis", "Analyze anti-CSRF token randomness.", ["csrf", "entropy"]),
        ("scan report export", "Write CSRF scan findings to a report file.", ["csrf", "report"]),
    ]),
    # NLP and string processing
    "rapidfuzz": ("nlp_string", [
        ("fuzzy string matching", "Score the similarity of two strings with tuned edit metrics.", ["fuzzy", "similarity"]),
        ("best match extraction", "Find the best matches for a query across a candidate list.", ["fuzzy", "extract"]),
        ("distance computation", "Compute edit distances with configurable weights.", ["distance", "levenshtein"]),
    ]),
    "prompt-optimizer": ("nlp_string", [
        ("prompt rewriting", "Rewrite a prompt to be clearer and more effective.", ["prompt", "rewrite"]),
        ("prompt scoring", "Score prompt variants against quality heuristics.", ["prompt", "scoring"]),
        ("prompt template library", "Apply curated templates to raw task statements.", ["prompt", "templates"]),
    ]),
    # Chemistry
    "aizynthfinder": ("chemistry", [
        ("retrosynthesis planning", "Plan retrosynthetic routes for a target molecule with tree search.", ["retrosynthesis", "planning"]),
        ("route scoring", "Score and rank candidate synthesis routes.", ["routes", "scoring"]),
        ("stock availability check", "Check precursor availability against building-block stocks.", ["stock", "lookup"]),
    ]),
    "chemformula": ("chemistry", [
        ("formula parsing", "Parse a chemical formula string into element counts.", ["formula", "parsing"]),
        ("molar mass computation", "Compute the molar mass of a parsed formula.", ["mass", "stoichiometry"]),
        ("formula formatting", "Format formulas with subscripts and charge annotations.", ["formula", "formatting"]),
    ]),
    "chemlib": ("chemistry", [
        ("periodic table lookup", "Look up element properties from the periodic table.", ["elements", "lookup"]),
        ("stoichiometry balancing", "Balance chemical equations and compute quantities.", ["stoichiometry", "balancing"]),
        ("electrochemistry calculations", "Run galvanic cell and electrolysis calculations.", ["electrochemistry", "cells"]),
    ]),
    # Web backend
    "bottle": ("web_backend", [
        ("route handling", "Serve HTTP routes from a single-file web application.", ["http", "routing"]),
        ("template rendering", "Render HTML responses from built-in templates.", ["http", "templates"]),
    ]),
    # Finance
    "backtrader": ("finance", [
        ("strategy backtesting", "Backtest a trading strategy over historical price data.", ["backtest", "strategy"]),
        ("performance analytics", "Compute returns, drawdown and trade statistics for a run.", ["backtest", "analytics"]),
    ]),
}

SINGLE_TASKS_PER_DOMAIN = {
    "vision_video": 90,
    "document_web_parsing": 61,
    "web_scraping": 40,
    "dev_security": 40,
    "speech_audio": 36,
    "chemistry": 30,
    "nlp_string": 20,
    "finance": 10,
    "web_backend": 9,
}

# Domain priors for indicator annotation: (d1, d2, d3, d4) probabilities.
INDICATOR_PRIORS = {
    "vision_video": (0.8, 0.7, 0.2, 0.1),
    "document_web_parsing": (0.5, 0.3, 0.3, 0.1),
    "web_scraping": (0.4, 0.6, 0.4, 0.1),
    "dev_security": (0.3, 0.3, 0.5, 0.5),
    "speech_audio": (0.8, 0.6, 0.2, 0.2),
    "chemistry": (0.5, 0.3, 0.3, 0.9),
    "nlp_string": (0.1, 0.2, 0.3, 0.1),
    "finance": (0.2, 0.3, 0.4, 0.8),
    "web_backend": (0.1, 0.2, 0.7, 0.1),
}

CHAIN_LENGTH_PLAN = [(2, 60), (3, 64), (4, 22), (5, 14), (6, 14), (7, 8), (8, 4)]

ASSET_REPOS = [
    "tesseract", "camelot", "trafilatura", "spleeter", "segment-anything",
    "pyscenedetect", "bandit", "rapidfuzz", "chemformula", "backtrader",
    "unstructured", "yt-dlp",
]


def build_registry() -> list[dict]:
    entries = []
    for repo_id, (domain, skills) in REPOS.items():
        entries.append(
            {
                "repo_id": repo_id,
                "domain": domain,
                "root": f"repos/{repo_id}",
                "ground_truth_skills": [
                    {
                        "skill_id": f"{repo_id}_skill_{i + 1}",
                        "name": name,
                        "description": description,
                        "tags": tags,
                    }
                    for i, (name, description, tags) in enumerate(skills)
                ],
            }
        )
    return entries


def spread(total: int, buckets: int) -> list[int]:
    base, rem = divmod(total, buckets)
    return [base + (1 if i < rem else 0) for i in range(buckets)]


def build_single_tasks(rng: random.Random) -> list[dict]:
    tasks = []
    for domain, total in SINGLE_TASKS_PER_DOMAIN.items():
        repo_ids = [rid for rid, (dom, _) in REPOS.items() if dom == domain]
        counts = spread(total, len(repo_ids))
        priors = INDICATOR_PRIORS[domain]
        for repo_id, n in zip(repo_ids, counts):
            skills = REPOS[repo_id][1]
            for i in range(n):
                name, description, _ = skills[i % len(skills)]
                indicators = {
                    "d1_constrained_env": rng.random() < priors[0],
                    "d2_uncertain_output": rng.random() < priors[1],
                    "d3_nonstandard_processing": rng.random() < priors[2],
                    "d4_domain_expertise": rng.random() < priors[3],
                }
                description_text = (
                    f"{description.rstrip('.')} using the {repo_id} tooling, "
                    f"and save the resulting artifact file."
                )
                input_parts = [{"kind": "text", "text": description_text}]
                if repo_id in ASSET_REPOS and i == 0:
                    input_parts.append(
                        {
                            "kind": "file",
                            "file": {
                                "path": f"assets/{repo_id}/sample_input.txt",
                                "mime_type": "text/plain",
                            },
                        }
                    )
                tasks.append(
                    {
                        "task_id": f"{repo_id}_task_{i + 1}",
                        "task_category": "single_agent",
                        "task_description": description_text,
                        "fuzzy_description": f"Use {repo_id} to {name} on the provided input.",
                        "input_parts": input_parts,
                        "indicators": indicators,
                        "expected": {
                            "oracle_steps": [
                                f"Step1: invoke the {name} capability of {repo_id} on the sample input, "
                                f"producing the expected artifact",
                            ],
                            "expected_artifact": f"an artifact file produced by {name}",
                            "success_criteria": [
                                "Check whether the script return code is 0",
                            ],
                        },
                    }
                )
    return tasks


def build_multi_tasks(rng: random.Random) -> list[dict]:
    repo_ids = list(REPOS)
    domain_of = {rid: REPOS[rid][0] for rid in repo_ids}
    all_domains = sorted(set(domain_of.values()))
    by_domain = {d: [r for r in repo_ids if domain_of[r] == d] for d in all_domains}
    tasks = []
    index = 1
    for length, count in CHAIN_LENGTH_PLAN:
        for _ in range(count):
            # Mostly 2-3 distinct domains, with a small set of 4-domain chains.
            if length == 2:
                k = 2
            elif length == 3:
                k = rng.choice([2, 2, 3])
            elif length <= 5:
                k = rng.choice([2, 3, 3])
            else:
                k = rng.choice([3, 3, 3, 4])
            while True:
                domains = rng.sample(all_domains, k)
                pool = [r for d in domains for r in by_domain[d]]
                if len(pool) >= length:
                    break
            # One repo per selected domain guarantees the cross-domain count.
            chain = [rng.choice(by_domain[d]) for d in domains]
            remaining = [r for r in pool if r not in chain]
            chain += rng.sample(remaining, length - k)
            rng.shuffle(chain)
            steps = []
            for j, rid in enumerate(chain):
                name, description, _ = REPOS[rid][1][rng.randrange(len(REPOS[rid][1]))]
                prefix = (
                    "Starting from the provided input, "
                    if j == 0
                    else "Consuming the previous step's output file, "
                )
                steps.append(
                    {
                        "step": j + 1,
                        "required_repo_id": rid,
                        "action": f"{prefix}{description.rstrip('.').lower()}.",
                        "expected_output": f"artifact produced by {name} ({rid})",
                    }
                )
            tasks.append(
                {
                    "task_id": f"multi_{index:03d}",
                    "goal": f"A {length}-step pipeline across {len(set(domain_of[r] for r in chain))} domains.",
                    "steps": steps,
                    "verification": [
                        "Check whether the final artifact file exists",
                        "Check whether the script return code is 0",
                    ],
                }
            )
            index += 1
    return tasks


def main() -> None:
    rng = random.Random(SEED)
    OUT.mkdir(parents=True, exist_ok=True)

    registry = build_registry()
    total_skills = sum(len(e["ground_truth_skills"]) for e in registry)
    assert len(registry) == 35, len(registry)
    assert total_skills == 127, total_skills

    single = build_single_tasks(rng)
    multi = build_multi_tasks(rng)
    assert len(single) == 336, len(single)
    assert len(multi) == 186, len(multi)

    (OUT / "registry.json").write_text(json.dumps(registry, indent=2) + "\n", encoding="utf-8")
    (OUT / "tasks_single.json").write_text(json.dumps(single, indent=2) + "\n", encoding="utf-8")
    (OUT / "tasks_multi.json").write_text(json.dumps(multi, indent=2) + "\n", encoding="utf-8")

    for repo_id in ASSET_REPOS:
        asset_dir = OUT / "assets" / repo_id
        asset_dir.mkdir(parents=True, exist_ok=True)
        (asset_dir / "sample_input.txt").write_text(
            f"surrogate sample input for {repo_id}\n", encoding="utf-8"
        )

    print(f"wrote registry ({len(registry)} repos, {total_skills} skills), "
          f"{len(single)} single tasks, {len(multi)} multi tasks to {OUT}")


if __name__ == "__main__":
    main()
