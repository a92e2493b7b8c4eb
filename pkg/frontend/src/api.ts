import type {
  ProjectInfo,
  SubmissionPayload,
  SubmitAck,
  Task,
  TemplateSetDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

export class ConflictError extends ApiError {}
export class ValidationError extends ApiError {}

async function raiseFor(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  if (response.status === 409) throw new ConflictError(detail, 409);
  if (response.status === 422) throw new ValidationError(detail, 422);
  throw new ApiError(detail, response.status);
}

/** Thin client for one annotator's view of one project. */
export class AnnotationApi {
  constructor(
    readonly baseUrl: string,
    readonly projectId: string,
    readonly token: string,
  ) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}/projects/${encodeURIComponent(this.projectId)}${path}`;
  }

  private headers(): Record<string, string> {
    return {
      "Content-Type": "application/json",
      "X-Annotator-Token": this.token,
    };
  }

  async projectInfo(): Promise<ProjectInfo> {
    const response = await fetch(this.url(""), { headers: this.headers() });
    if (!response.ok) await raiseFor(response);
    return response.json();
  }

  async templateSet(): Promise<TemplateSetDoc> {
    const response = await fetch(this.url("/template-set"), { headers: this.headers() });
    if (!response.ok) await raiseFor(response);
    return response.json();
  }

  async nextTask(): Promise<Task | null> {
    const response = await fetch(this.url("/next-task"), { headers: this.headers() });
    if (!response.ok) await raiseFor(response);
    const body = await response.json();
    return body.task ?? null;
  }

  async submit(
    itemId: string,
    revision: number,
    payload: SubmissionPayload,
  ): Promise<SubmitAck> {
    const response = await fetch(this.url("/submit"), {
      method: "POST",
      headers: this.headers(),
      body: JSON.stringify({ item_id: itemId, revision, payload }),
    });
    if (!response.ok) await raiseFor(response);
    return response.json();
  }

  /** Server-side render, used to cross-check the live preview. */
  async renderPreview(
    templateId: string,
    locale: string,
    fillers: Record<string, string>,
  ): Promise<string> {
    const response = await fetch(this.url("/render"), {
      method: "POST",
      headers: this.headers(),
      body: JSON.stringify({ template_id: templateId, locale, fillers }),
    });
    if (!response.ok) await raiseFor(response);
    const body = await response.json();
    return body.text;
  }
}
