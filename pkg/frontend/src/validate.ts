// Client-side validation, kept at least as strict as the service schema:
// every payload this module accepts must be accepted by the server on
// replay (covered by tests). Used to gate the submit buttons.

import type {
  FillerPayload,
  FreeTextPayload,
  JudgmentPayload,
  TemplateApplicationPayload,
  TemplateDoc,
} from "./types.js";
import { NOT_APPLICABLE } from "./types.js";

const EXTRACTABILITIES = new Set([
  "extractable",
  "extractable_with_changes",
  "not_extractable",
]);

export function validateFreeText(
  payload: FreeTextPayload,
  sentenceCount: number,
): string[] {
  const problems: string[] = [];
  if (!payload.text.trim()) problems.push("comment text is empty");
  if (payload.target.length === 0) problems.push("no target sentence selected");
  for (const index of payload.target) {
    if (!Number.isInteger(index) || index < 0 || index >= sentenceCount) {
      problems.push(`target sentence ${index} out of range`);
    }
  }
  return problems;
}

function validateFiller(slot: string, filler: FillerPayload): string[] {
  const problems: string[] = [];
  if (!filler.text) problems.push(`slot ${slot} is empty`);
  if (!EXTRACTABILITIES.has(filler.extractability)) {
    problems.push(`slot ${slot} has an unknown extractability`);
  }
  const hasSpan = filler.source_span !== null;
  if (hasSpan !== (filler.extractability === "extractable")) {
    problems.push(`slot ${slot}: source span must be present iff extractable`);
  }
  if (filler.source_span && filler.source_span.start >= filler.source_span.end) {
    problems.push(`slot ${slot}: empty source span`);
  }
  return problems;
}

export function validateTemplateApplication(
  payload: TemplateApplicationPayload,
  templatesById: Map<string, TemplateDoc>,
): string[] {
  if (payload.label === NOT_APPLICABLE) {
    return payload.fillers && Object.keys(payload.fillers).length > 0
      ? ["NotApplicable takes no fillers"]
      : [];
  }
  const template = templatesById.get(payload.label);
  if (!template) return [`unknown template ${payload.label}`];
  const problems: string[] = [];
  const fillers = payload.fillers ?? {};
  const given = new Set(Object.keys(fillers));
  for (const slot of template.slots) {
    if (!given.has(slot)) problems.push(`slot ${slot} is unfilled`);
  }
  for (const slot of given) {
    if (!template.slots.includes(slot)) problems.push(`unexpected slot ${slot}`);
  }
  for (const [slot, filler] of Object.entries(fillers)) {
    problems.push(...validateFiller(slot, filler));
  }
  return problems;
}

export function validateJudgment(payload: Partial<JudgmentPayload>): string[] {
  return payload.score === 1 || payload.score === 2 || payload.score === 3
    ? []
    : ["pick a score"];
}
