"""HTTP facade over generation, valence annotation, templates, and metrics.

Handlers only read the registries built at startup; every request that
carries a seed is reproducible, and malformed input maps to 4xx rather
than crashing the worker.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from moodsheet import __version__
from moodsheet.affect import ValenceDescriptor, bar_descriptors, piece_valence
from moodsheet.metrics import corpus_report
from moodsheet.models import (
    IncompleteGenerationError,
    SamplerConfig,
    generate,
    parameter_count,
)
from moodsheet.profile import sample_template
from moodsheet.score import (
    KeyMode,
    LeadSheet,
    UnsupportedQualityError,
    leadsheet_from_dict,
    leadsheet_to_dict,
    write_musicxml,
)
from moodsheet.service.registry import ServiceState
from moodsheet.service.schemas import (
    SCHEMA_VERSION,
    ConditionCell,
    GenerateRequest,
    GenerateResponse,
    MetricsRequest,
    MetricsResponse,
    ModelInfo,
    ModelsResponse,
    RealizedBar,
    TemplateRequest,
    TemplateResponse,
    ValenceRequest,
    ValenceResponse,
    VocabResponse,
    condition_track_from_cells,
)
from moodsheet.tokenizer import conditions_of

__all__ = ["create_app", "run_generation"]


def _parse_sheet(raw: dict) -> LeadSheet:
    try:
        return leadsheet_from_dict(raw)
    except UnsupportedQualityError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except (KeyError, TypeError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=f"malformed lead sheet: {exc}")


def _piece_valence_or_neutral(sheet: LeadSheet) -> tuple[float, str]:
    """Harmony-free sheets fall back to the neutral default used per bar."""
    try:
        mean, descriptor = piece_valence(sheet)
    except ValueError:
        return 0.0, ValenceDescriptor.NEUTRAL.value
    return mean, descriptor.value


def run_generation(state: ServiceState, req: GenerateRequest) -> GenerateResponse:
    """Produce a lead sheet for a request; shared by HTTP and local CLI.

    Raises LookupError for an unknown model name, ValueError for invalid
    conditions or key, IncompleteGenerationError when decoding stalls.
    """
    model = state.models.get(req.model)
    if model is None:
        raise LookupError(f"unknown model {req.model!r}")
    track = condition_track_from_cells(req.conditions)
    key = KeyMode(req.key)
    sampler = SamplerConfig(temperature=req.temperature, seed=req.seed, greedy=req.greedy)
    result = generate(
        model,
        track,
        sampler,
        state.vocab,
        key=key,
        title=f"{req.model}-{req.seed}",
        source="service",
    )
    sheet = result.sheet
    realized = conditions_of(sheet)
    mean, descriptor = _piece_valence_or_neutral(sheet)
    bars = [
        RealizedBar(
            requested=req.conditions[i],
            realized_valence=realized[i].valence.value,
            realized_density=realized[i].density.value,
            valence_matches=realized[i].valence.value == req.conditions[i].valence,
            density_matches=realized[i].density.value == req.conditions[i].density,
        )
        for i in range(len(sheet.bars))
    ]
    return GenerateResponse(
        model=req.model,
        seed=req.seed,
        temperature=result.temperature,
        lead_sheet=leadsheet_to_dict(sheet),
        tokens=list(result.tokens.ids),
        musicxml=write_musicxml(sheet),
        bars=bars,
        piece_valence=mean,
        piece_descriptor=descriptor,
    )


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="moodsheet service", version=__version__)
    app.state.registry = state
    # the browser companion is served from its own origin
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def invalid_request(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={
                "schema_version": SCHEMA_VERSION,
                "detail": jsonable_encoder(exc.errors()),
            },
        )

    @app.post("/generate", response_model=GenerateResponse)
    def generate_sheet(req: GenerateRequest) -> GenerateResponse:
        try:
            return run_generation(state, req)
        except LookupError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except IncompleteGenerationError as exc:
            raise HTTPException(
                status_code=500, detail=f"generation did not finish: {exc}"
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.post("/template", response_model=TemplateResponse)
    def build_template(req: TemplateRequest) -> TemplateResponse:
        profile = state.profiles.get(req.profile)
        if profile is None:
            raise HTTPException(
                status_code=404, detail=f"unknown profile {req.profile!r}"
            )
        track = sample_template(profile, req.bars, seed=req.seed)
        return TemplateResponse(
            profile=req.profile,
            conditions=[ConditionCell.from_domain(c) for c in track],
        )

    @app.post("/valence", response_model=ValenceResponse)
    def annotate_valence(req: ValenceRequest) -> ValenceResponse:
        sheet = _parse_sheet(req.lead_sheet)
        try:
            mean, descriptor = piece_valence(sheet)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return ValenceResponse(
            bars=[d.value for d in bar_descriptors(sheet)],
            piece_valence=mean,
            piece_descriptor=descriptor.value,
        )

    @app.post("/metrics", response_model=MetricsResponse)
    def evaluate_sheets(req: MetricsRequest) -> MetricsResponse:
        sheets = [_parse_sheet(raw) for raw in req.sheets]
        try:
            if req.reference is None:
                comparison = corpus_report(sheets, columns=("sheets",))
            else:
                reference = [_parse_sheet(raw) for raw in req.reference]
                comparison = corpus_report(reference, sheets)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=f"cannot evaluate: {exc}")
        return MetricsResponse(report=comparison.to_dict())

    @app.get("/models", response_model=ModelsResponse)
    def list_models() -> ModelsResponse:
        return ModelsResponse(
            models=[
                ModelInfo(
                    name=name,
                    architecture=type(model).__name__,
                    parameters=parameter_count(model),
                )
                for name, model in sorted(state.models.items())
            ],
            profiles=sorted(state.profiles),
        )

    @app.get("/vocab", response_model=VocabResponse)
    def describe_vocab() -> VocabResponse:
        vocab = state.vocab
        return VocabResponse(
            encoder_size=vocab.encoder_size(),
            decoder_size=vocab.decoder_size(),
            content_hash=vocab.content_hash(),
            encoder_tokens=list(vocab.encoder_tokens),
            decoder_tokens=list(vocab.decoder_tokens),
        )

    return app
