#!/usr/bin/env python3
"""
LLM client for the external content generator and table validator.
Speaks the OpenAI-compatible chat completions format and falls back to the
Ollama generate endpoint.
"""

import json
import logging
import re
from typing import List, Optional

import requests

from src.config.config import config
from src.core.errors import ExternalClientError
from src.metrics.teds import extract_table_html
from src.synth.content import Verdict

logger = logging.getLogger("llm-client")

GENERATOR_PROMPT = (
    "Populate the empty table based on the HTML provided. Return a complete table! "
    "Ensure the table structure exactly match the empty table provided!"
)

VALIDATOR_PROMPT = (
    "You are a table evaluating expert, you will receive an HTML-formatted table to "
    "verify both its structural compliance and the contextual coherence of its content."
)

VALIDATOR_REPLY_FORMAT = (
    'Answer with a JSON object {"accept": true|false, "reason": "<short reason>"}.'
)

_LEADING_WORD = re.compile(r"^\W*(yes|no|accept|accepted|reject|rejected|true|false)\b", re.IGNORECASE)
_JSON_OBJECT = re.compile(r"\{.*?\}", re.DOTALL)

API_FORMATS = ("openai", "ollama")


class LLMClient:
    """
    Minimal client for a chat-completion server.
    Endpoint, model and key default to TABFORGE_LLM_URL, TABFORGE_LLM_MODEL and
    TABFORGE_LLM_KEY.
    """

    def __init__(
        self,
        server_url: Optional[str] = None,
        model_name: Optional[str] = None,
        api_key: Optional[str] = None,
        timeout: Optional[float] = None,
        api_format: str = "openai",
    ):
        self.server_url = (server_url or config.get("LLM_SERVER_URL") or "").rstrip("/")
        if not self.server_url:
            raise ExternalClientError("no LLM server configured (set TABFORGE_LLM_URL)")
        self.model_name = model_name or config.get("LLM_MODEL_NAME", "gpt-4o")
        self.api_key = api_key if api_key is not None else config.get("LLM_API_KEY", "")
        self.timeout = timeout or config.get("LLM_TIMEOUT", 120.0)
        if api_format not in API_FORMATS:
            raise ValueError(f"api_format must be one of {API_FORMATS}")
        self.api_format = api_format

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def _post(self, path: str, payload: dict) -> dict:
        url = f"{self.server_url}{path}"
        try:
            response = requests.post(url, headers=self._headers(), json=payload, timeout=self.timeout)
        except requests.exceptions.RequestException as e:
            raise ExternalClientError(f"request to {url} failed: {e}")
        if response.status_code != 200:
            raise ExternalClientError(
                f"{url} returned status {response.status_code}: {response.text[:200]}",
                status=response.status_code,
            )
        try:
            return response.json()
        except ValueError:
            raise ExternalClientError(f"{url} returned a non-JSON body: {response.text[:200]}")

    def _generate_openai(self, prompt: str, system_prompt: Optional[str], max_tokens: int, temperature: float) -> str:
        messages: List[dict] = []
        if system_prompt:
            messages.append({"role": "system", "content": system_prompt})
        messages.append({"role": "user", "content": prompt})
        data = self._post(
            "/v1/chat/completions",
            {
                "model": self.model_name,
                "messages": messages,
                "temperature": temperature,
                "max_tokens": max_tokens,
            },
        )
        try:
            text = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            raise ExternalClientError("unexpected response format from chat completions API")
        logger.debug(f"LLM response (OpenAI): {text[:100]}...")
        return text.strip()

    def _generate_ollama(self, prompt: str, system_prompt: Optional[str], max_tokens: int, temperature: float) -> str:
        payload = {
            "model": self.model_name,
            "prompt": prompt,
            "options": {"temperature": temperature, "num_predict": max_tokens},
            "stream": False,
        }
        if system_prompt:
            payload["system"] = system_prompt
        data = self._post("/ollama/api/generate", payload)
        if "response" not in data:
            raise ExternalClientError("unexpected response format from Ollama API")
        logger.debug(f"LLM response (Ollama): {data['response'][:100]}...")
        return data["response"].strip()

    def generate(
        self,
        prompt: str,
        system_prompt: Optional[str] = None,
        max_tokens: int = 4096,
        temperature: float = 0.0,
    ) -> str:
        """
        Generate text for a prompt.

        The configured format is tried first; on failure the other one is
        tried before giving up.

        Args:
            prompt: User prompt
            system_prompt: Optional system instruction
            max_tokens: Generation limit
            temperature: Sampling temperature

        Returns:
            Generated text

        Raises:
            ExternalClientError: if every format fails
        """
        order = [self.api_format] + [f for f in API_FORMATS if f != self.api_format]
        last_error: Optional[ExternalClientError] = None
        for fmt in order:
            try:
                if fmt == "openai":
                    text = self._generate_openai(prompt, system_prompt, max_tokens, temperature)
                else:
                    text = self._generate_ollama(prompt, system_prompt, max_tokens, temperature)
                self.api_format = fmt
                return text
            except ExternalClientError as e:
                logger.info(f"{fmt} generation failed: {e}")
                last_error = e
        raise last_error


class LLMContentGenerator:
    """ContentGenerator backed by an LLM."""

    def __init__(self, client: LLMClient):
        self.client = client

    def populate(self, structural_html: str) -> str:
        reply = self.client.generate(f"{GENERATOR_PROMPT}\n\n{structural_html}")
        return extract_table_html(reply) or reply


def parse_verdict(reply: str) -> Verdict:
    """
    Read a validator reply: a JSON object with accept/reason, or failing that
    a leading yes/no/accept/reject word. Anything else is a rejection.
    """
    match = _JSON_OBJECT.search(reply or "")
    if match:
        try:
            data = json.loads(match.group(0))
            if isinstance(data, dict) and "accept" in data:
                accept = data["accept"]
                if isinstance(accept, str):
                    accept = accept.strip().lower() in ("true", "yes", "accept")
                return Verdict(bool(accept), str(data.get("reason", "")))
        except ValueError:
            pass
    word = _LEADING_WORD.match(reply or "")
    if word:
        accept = word.group(1).lower() in ("yes", "accept", "accepted", "true")
        return Verdict(accept, (reply or "").strip()[:200])
    return Verdict(False, "unparseable_verdict")


class LLMTableValidator:
    """TableValidator backed by an LLM judge."""

    def __init__(self, client: LLMClient):
        self.client = client

    def judge(self, filled_html: str, structural_html: Optional[str] = None) -> Verdict:
        reply = self.client.generate(
            f"{filled_html}\n\n{VALIDATOR_REPLY_FORMAT}",
            system_prompt=VALIDATOR_PROMPT,
            max_tokens=256,
        )
        return parse_verdict(reply)
