// Client-side validation must never be weaker than the service schema:
// any payload the client would let through is replayed against the live
// service and must be accepted; payloads the client blocks are replayed
// and must be rejected too (for the classes of defect the server checks).

import { beforeAll, describe, expect, inject, it } from "vitest";

import { AnnotationApi, ValidationError } from "../src/api.js";
import type {
  TemplateApplicationPayload,
  TemplateApplicationTask,
  TemplateDoc,
} from "../src/types.js";
import { validateTemplateApplication } from "../src/validate.js";

const api = new AnnotationApi(inject("baseUrl"), "validation", "token-ann1");
let templatesById: Map<string, TemplateDoc>;

beforeAll(async () => {
  const doc = await api.templateSet();
  templatesById = new Map(doc.templates.map((t) => [t.id, t]));
});

function filler(text: string, extractability = "not_extractable" as const) {
  return { text, extractability, source_span: null };
}

const CASES: { name: string; payload: TemplateApplicationPayload }[] = [
  {
    name: "complete two-slot diagnosis",
    payload: { label: "CA2", fillers: { x: filler("homework"), y: filler("passivity") } },
  },
  {
    name: "not applicable with no fillers",
    payload: { label: "NotApplicable", fillers: null },
  },
  {
    name: "missing one slot",
    payload: { label: "CA2", fillers: { x: filler("homework") } },
  },
  {
    name: "extra slot",
    payload: {
      label: "EX1",
      fillers: { x: filler("habits"), y: filler("uninvited") },
    },
  },
  {
    name: "empty filler text",
    payload: { label: "EX1", fillers: { x: filler("") } },
  },
  {
    name: "unknown template id",
    payload: { label: "ZZ9", fillers: { x: filler("a") } },
  },
  {
    name: "span claimed without extractable class",
    payload: {
      label: "EX1",
      fillers: {
        x: {
          text: "habits",
          extractability: "not_extractable",
          source_span: { doc_kind: "counterargument", doc_id: "ca00", start: 0, end: 6 },
        },
      },
    },
  },
  {
    name: "three-slot template fully filled",
    payload: {
      label: "CLS2",
      fillers: { x: filler("a"), y: filler("b"), z: filler("c") },
    },
  },
];

describe("client validation replay against the service", () => {
  it("client-accepted payloads are service-accepted; blocked ones are 422", async () => {
    for (const { name, payload } of CASES) {
      const clientProblems = validateTemplateApplication(payload, templatesById);
      const task = (await api.nextTask()) as TemplateApplicationTask | null;
      expect(task, `ran out of tasks before case: ${name}`).not.toBeNull();
      if (clientProblems.length === 0) {
        const ack = await api.submit(task!.item_id, task!.revision, payload);
        expect(ack.ok, name).toBe(true);
      } else {
        await expect(
          api.submit(task!.item_id, task!.revision, payload),
          name,
        ).rejects.toBeInstanceOf(ValidationError);
      }
    }
  });
});
