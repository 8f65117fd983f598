import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { jsonResponse } from "./fixtures.js";

afterEach(() => {
  vi.unstubAllGlobals();
});

function stubFetch(response: Response) {
  const mock = vi.fn().mockResolvedValue(response);
  vi.stubGlobal("fetch", mock);
  return mock;
}

describe("ApiClient", () => {
  it("lists ontologies", async () => {
    const mock = stubFetch(jsonResponse([{ id: "fa", versionInfo: "1.0", comment: "" }]));
    const client = new ApiClient("http://svc");
    const ontologies = await client.listOntologies();
    expect(mock).toHaveBeenCalledWith("http://svc/ontologies");
    expect(ontologies[0].id).toBe("fa");
  });

  it("requests graphs with view, layout, and seed", async () => {
    const mock = stubFetch(jsonResponse({ nodes: [], edges: [] }));
    await new ApiClient().graph("fa", "class", "organic", 42);
    expect(mock).toHaveBeenCalledWith("/ontologies/fa/graph?view=class&layout=organic&seed=42");
  });

  it("submits annotations as JSON", async () => {
    const mock = stubFetch(jsonResponse({ saved: ["pic1"] }, 201));
    const saved = await new ApiClient().submitInstances("fa", {
      instanceID: "pic1", classID: "Pictures", assertions: [],
    });
    expect(saved).toEqual(["pic1"]);
    const [, init] = mock.mock.calls[0];
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body).classID).toBe("Pictures");
  });

  it("surfaces 422 violations as ApiError", async () => {
    stubFetch(jsonResponse({
      error: "annotation failed validation",
      violations: [{ code: "CardinalityUnmet", subjects: ["pic1", "PictureDate"],
                     message: "expected exactly 1" }],
    }, 422));
    const client = new ApiClient();
    const error = await client
      .submitInstances("fa", { instanceID: "pic1", classID: "Pictures", assertions: [] })
      .catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).status).toBe(422);
    expect((error as ApiError).violations[0].code).toBe("CardinalityUnmet");
  });

  it("posts queries with the closure flag", async () => {
    const mock = stubFetch(jsonResponse(["http://x/img.jpg"]));
    const result = await new ApiClient().runQuery("fa", "Answer($x) :- p($x, y).", false);
    expect(result).toEqual(["http://x/img.jpg"]);
    const [, init] = mock.mock.calls[0];
    expect(JSON.parse(init.body)).toEqual({ query: "Answer($x) :- p($x, y).", closure: false });
  });

  it("builds image URLs under the service base", () => {
    expect(new ApiClient("http://svc").imageUrl("example.jpg"))
      .toBe("http://svc/images/example.jpg");
  });
});
