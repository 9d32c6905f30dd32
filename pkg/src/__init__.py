"""heighttower: certified radical towers, heights and witnesses."""
